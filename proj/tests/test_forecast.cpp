#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "triadyn/error.hpp"
#include "triadyn/forecast.hpp"

using namespace triadyn;

namespace {

TransitionMatrix identity_matrix() {
    TransitionMatrix m;
    for (int i = 0; i < kTriadTypeCount; ++i) m.at(i, i) = 1.0;
    return m;
}

std::vector<double> random_simplex(std::mt19937_64& rng) {
    std::vector<double> v(kTriadTypeCount);
    double sum = 0.0;
    for (double& x : v) sum += (x = oracle::uniform01(rng) + 1e-4);
    for (double& x : v) x /= sum;
    return v;
}

}  // namespace

TEST_CASE("forecast_one_step: identity passes through, point mass reads a row") {
    std::mt19937_64 rng(2);
    const std::vector<double> prop = random_simplex(rng);
    const std::vector<double> same = forecast_one_step(prop, identity_matrix());
    for (int j = 0; j < kTriadTypeCount; ++j) CHECK(same[j] == doctest::Approx(prop[j]));

    TransitionMatrix m = identity_matrix();
    for (int j = 0; j < kTriadTypeCount; ++j) m.at(17, j) = 1.0 / kTriadTypeCount;
    std::vector<double> point(kTriadTypeCount, 0.0);
    point[17] = 1.0;
    const std::vector<double> row = forecast_one_step(point, m);
    for (int j = 0; j < kTriadTypeCount; ++j) {
        CHECK(row[j] == doctest::Approx(m.at(17, j)).epsilon(1e-12));
    }

    double sum = 0.0;
    for (double v : forecast_one_step(prop, m)) sum += v;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));

    const std::vector<double> short_prop(3, 1.0 / 3);
    CHECK_THROWS_AS(forecast_one_step(short_prop, m), InputError);
}

TEST_CASE("rmse arithmetic and symmetry") {
    const std::vector<double> a = {1.0, 2.0, 3.0};
    CHECK(rmse(a, a) == doctest::Approx(0.0));

    const std::vector<double> b = {1.5, 2.5, 3.5};
    CHECK(rmse(a, b) == doctest::Approx(0.5).epsilon(1e-12));  // constant offset

    const std::vector<double> p = {0.3, -0.4};
    const std::vector<double> z = {0.0, 0.0};
    CHECK(rmse(p, z) == doctest::Approx(std::sqrt(0.125)).epsilon(1e-12));
    CHECK(rmse(p, z) == doctest::Approx(rmse(z, p)));

    CHECK_THROWS_AS(rmse(a, p), InputError);
}

TEST_CASE("evaluate_methods: constant sequences make last-proportion exact") {
    std::mt19937_64 rng(3);
    const std::vector<double> prop = random_simplex(rng);
    const std::vector<std::vector<double>> props(6, prop);
    const std::vector<TransitionMatrix> phat(5, identity_matrix());
    SolverConfig config;
    config.lambda1 = 0.1;
    config.lambda2 = 0.01;
    const ForecastReport report = evaluate_methods(props, phat, config, 2);
    REQUIRE(report.steps == std::vector<int>{4, 5});
    CHECK(report.mean_rmse(ForecastMethod::LastProportion) == doctest::Approx(0.0));
    CHECK(report.mean_rmse(ForecastMethod::AverageProportion) == doctest::Approx(0.0));
    CHECK(report.mean_rmse(ForecastMethod::IndividualMarkov) == doctest::Approx(0.0));
}

TEST_CASE("evaluate_methods validates its inputs") {
    std::mt19937_64 rng(5);
    const std::vector<std::vector<double>> props(4, random_simplex(rng));
    const std::vector<TransitionMatrix> phat(3, identity_matrix());
    SolverConfig config;
    CHECK_THROWS_AS(evaluate_methods(props, phat, config, 0), InputError);
    CHECK_THROWS_AS(evaluate_methods(props, phat, config, 3), InputError);  // < 2 train periods
    const std::vector<TransitionMatrix> wrong(2, identity_matrix());
    CHECK_THROWS_AS(evaluate_methods(props, wrong, config, 1), InputError);
    const std::vector<std::vector<double>> two(props.begin(), props.begin() + 2);
    const std::vector<TransitionMatrix> one(1, identity_matrix());
    CHECK_THROWS_AS(evaluate_methods(two, one, config, 1), InputError);
    const std::vector<int> bad_support = {kTriadTypeCount};
    CHECK_THROWS_AS(evaluate_methods(props, phat, config, 1, bad_support), InputError);
}

TEST_CASE("walk-forward discipline: tampering with future data changes nothing") {
    std::mt19937_64 rng(7);
    const oracle::Block a = oracle::random_block(rng, 5);
    const oracle::Block b = oracle::shifted_block(a, rng, 0.2);
    oracle::SampledChain chain = oracle::sample_chain(
        rng, 5, /*periods=*/12, /*entities=*/1500,
        [&](int t) { return oracle::interpolate_block(a, b, t / 10.0); });

    SolverConfig config;
    config.lambda1 = 0.2;
    config.lambda2 = 0.02;
    const ForecastReport clean = evaluate_methods(chain.proportions, chain.empirical, config, 3);

    // Corrupt the last period's proportion and the last empirical matrix;
    // only the final step's scores may move (its truth changed), and only
    // through the truth term.
    oracle::SampledChain tampered = chain;
    for (double& v : tampered.proportions.back()) v = 1.0 / kTriadTypeCount;
    tampered.empirical.back() = identity_matrix();
    const ForecastReport dirty =
        evaluate_methods(tampered.proportions, tampered.empirical, config, 3);

    for (int m = 0; m < kForecastMethodCount; ++m) {
        // Steps before the corrupted index are bit-identical.
        CHECK(dirty.rmse_by_method[m][0] == clean.rmse_by_method[m][0]);
        CHECK(dirty.rmse_by_method[m][1] == clean.rmse_by_method[m][1]);
    }
}

TEST_CASE("time-varying forecasts beat the raw last empirical matrix on drifting chains") {
    double tv_total = 0.0, im_total = 0.0;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        std::mt19937_64 rng(seed * 977);
        const oracle::Block a = oracle::random_block(rng, 16);
        const oracle::Block b = oracle::shifted_block(a, rng, 0.3);
        const oracle::SampledChain chain = oracle::sample_chain(
            rng, 16, /*periods=*/20, /*entities=*/5000,
            [&](int t) { return oracle::interpolate_block(a, b, t / 18.0); });
        SolverConfig config;  // library default weights
        const ForecastReport report =
            evaluate_methods(chain.proportions, chain.empirical, config, 3);
        tv_total += report.mean_rmse(ForecastMethod::TimeVarying);
        im_total += report.mean_rmse(ForecastMethod::IndividualMarkov);
    }
    CHECK(tv_total < im_total);
}

TEST_CASE("iid stationary chains: average-proportion is competitive (no ordering asserted)") {
    std::mt19937_64 rng(11);
    const oracle::Block block = oracle::random_block(rng, 6);
    const oracle::SampledChain chain = oracle::sample_chain(
        rng, 6, /*periods=*/15, /*entities=*/2000, [&](int) { return block; });
    SolverConfig config;
    const ForecastReport report = evaluate_methods(chain.proportions, chain.empirical, config, 4);
    CHECK(std::isfinite(report.mean_rmse(ForecastMethod::AverageProportion)));
    CHECK(std::isfinite(report.mean_rmse(ForecastMethod::LastProportion)));
    CHECK(report.mean_rmse(ForecastMethod::AverageProportion) > 0.0);
}

TEST_CASE("tune_hyperparams picks sensible grid points") {
    std::mt19937_64 rng(13);
    const oracle::Block a = oracle::random_block(rng, 8);
    const oracle::Block b = oracle::shifted_block(a, rng, 0.25);
    const oracle::SampledChain chain = oracle::sample_chain(
        rng, 8, /*periods=*/14, /*entities=*/2500,
        [&](int t) { return oracle::interpolate_block(a, b, t / 12.0); });
    SolverConfig base;

    const std::vector<std::pair<double, double>> singleton = {{0.7, 0.07}};
    CHECK(tune_hyperparams(chain.proportions, chain.empirical, singleton, 3, base) ==
          std::pair<double, double>{0.7, 0.07});

    CHECK_THROWS_AS(tune_hyperparams(chain.proportions, chain.empirical, {}, 3, base), InputError);

    // A grid spanning sensible smoothing vs none: the chosen pair must beat
    // the worst pair in validation RMSE (the generator is the oracle).
    const std::vector<std::pair<double, double>> grid = {
        {1e-6, 1e-6}, {0.05, 0.005}, {0.5, 0.05}, {5.0, 0.5}};
    const auto chosen = tune_hyperparams(chain.proportions, chain.empirical, grid, 3, base);
    double chosen_score = 0.0, worst_score = 0.0;
    for (const auto& [l1, l2] : grid) {
        SolverConfig config = base;
        config.lambda1 = l1;
        config.lambda2 = l2;
        const double score = evaluate_methods(chain.proportions, chain.empirical, config, 3)
                                 .mean_rmse(ForecastMethod::TimeVarying);
        worst_score = std::max(worst_score, score);
        if (std::pair<double, double>{l1, l2} == chosen) chosen_score = score;
    }
    CHECK(chosen_score < worst_score);

    // The default grid spans the defaults used by the solver config.
    const auto defaults = default_hyperparameter_grid();
    bool has_default_point = false;
    for (const auto& p : defaults) {
        if (p == std::pair<double, double>{0.5, 0.05}) has_default_point = true;
    }
    CHECK(has_default_point);
}
