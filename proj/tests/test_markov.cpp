#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "triadyn/error.hpp"
#include "triadyn/markov.hpp"

using namespace triadyn;

namespace {

TransitionMatrix random_stochastic(std::mt19937_64& rng) {
    TransitionMatrix m;
    for (int i = 0; i < kTriadTypeCount; ++i) {
        double sum = 0.0;
        for (int j = 0; j < kTriadTypeCount; ++j) sum += (m.at(i, j) = oracle::uniform01(rng));
        for (int j = 0; j < kTriadTypeCount; ++j) m.at(i, j) /= sum;
    }
    return m;
}

TransitionMatrix identity_matrix() {
    TransitionMatrix m;
    for (int i = 0; i < kTriadTypeCount; ++i) m.at(i, i) = 1.0;
    return m;
}

}  // namespace

TEST_CASE("normalize_rows divides by row sums and applies the zero-row policy") {
    TransitionCounts counts;
    counts.at(0, 0) = 2;
    counts.at(0, 1) = 2;
    const TransitionMatrix ident = normalize_rows(counts, ZeroRowPolicy::Identity);
    CHECK(ident.at(0, 0) == doctest::Approx(0.5));
    CHECK(ident.at(0, 1) == doctest::Approx(0.5));
    CHECK(ident.at(5, 5) == doctest::Approx(1.0));  // zero row -> basis row

    const TransitionMatrix unif = normalize_rows(counts, ZeroRowPolicy::Uniform);
    CHECK(unif.at(5, 0) == doctest::Approx(1.0 / kTriadTypeCount));

    std::mt19937_64 rng(3);
    TransitionCounts randomc;
    for (int i = 0; i < kTriadTypeCount; ++i) {
        for (int j = 0; j < kTriadTypeCount; ++j) {
            randomc.at(i, j) = oracle::uniform_int(rng, 0, 5);
        }
    }
    const TransitionMatrix m = normalize_rows(randomc);
    for (int i = 0; i < kTriadTypeCount; ++i) {
        double sum = 0.0;
        for (int j = 0; j < kTriadTypeCount; ++j) sum += m.at(i, j);
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("average_transition is the entrywise mean") {
    std::mt19937_64 rng(5);
    const TransitionMatrix m = random_stochastic(rng);
    const std::vector<TransitionMatrix> twice = {m, m};
    const TransitionMatrix mean2 = average_transition(twice);
    for (std::size_t e = 0; e < m.p.size(); ++e) CHECK(mean2.p[e] == doctest::Approx(m.p[e]));

    TransitionMatrix uniform;
    for (double& v : uniform.p) v = 1.0 / kTriadTypeCount;
    const std::vector<TransitionMatrix> pair = {identity_matrix(), uniform};
    const TransitionMatrix mean = average_transition(pair);
    for (int i = 0; i < kTriadTypeCount; ++i) {
        double sum = 0.0;
        for (int j = 0; j < kTriadTypeCount; ++j) sum += mean.at(i, j);
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }

    // Two permutation matrices: every row has two 0.5 entries (or one 1.0 when
    // the permutations agree; use disjoint cycles so they never agree).
    TransitionMatrix pa, pb;
    for (int i = 0; i < kTriadTypeCount; ++i) {
        pa.at(i, (i + 1) % kTriadTypeCount) = 1.0;
        pb.at(i, (i + 2) % kTriadTypeCount) = 1.0;
    }
    const std::vector<TransitionMatrix> perms = {pa, pb};
    const TransitionMatrix mp = average_transition(perms);
    for (int i = 0; i < kTriadTypeCount; ++i) {
        int halves = 0;
        for (int j = 0; j < kTriadTypeCount; ++j) {
            if (mp.at(i, j) != 0.0) {
                CHECK(mp.at(i, j) == doctest::Approx(0.5));
                ++halves;
            }
        }
        CHECK(halves == 2);
    }

    CHECK_THROWS_AS(average_transition({}), InputError);
}

TEST_CASE("stationary: smoothed identity mixes to uniform") {
    const TransitionMatrix ident = identity_matrix();
    const std::vector<double> pi = stationary(ident);
    for (double v : pi) CHECK(v == doctest::Approx(1.0 / kTriadTypeCount).epsilon(1e-6));
}

TEST_CASE("stationary: embedded 2-state chain matches the hand-solved balance") {
    // pi = pi P for P = [[0.9, 0.1], [0.5, 0.5]]: 0.1 pi0 = 0.5 pi1 -> [5/6, 1/6].
    TransitionMatrix m = identity_matrix();
    m.at(0, 0) = 0.9;
    m.at(0, 1) = 0.1;
    m.at(1, 0) = 0.5;
    m.at(1, 1) = 0.5;
    StationaryOptions opts;
    opts.smoothing_epsilon = 0.0;
    std::vector<double> start(kTriadTypeCount, 0.0);
    start[0] = start[1] = 0.5;
    opts.start = start;
    const std::vector<double> pi = stationary(m, opts);
    CHECK(pi[0] == doctest::Approx(5.0 / 6.0).epsilon(1e-9));
    CHECK(pi[1] == doctest::Approx(1.0 / 6.0).epsilon(1e-9));
    for (int i = 2; i < kTriadTypeCount; ++i) CHECK(pi[i] == 0.0);
}

TEST_CASE("stationary: hitting the iteration cap raises with the residual") {
    TransitionMatrix m;
    for (int i = 0; i < kTriadTypeCount; ++i) {
        m.at(i, (i + 1) % kTriadTypeCount) = 1.0;  // slow-mixing cyclic shift
    }
    StationaryOptions opts;
    opts.max_iters = 2;
    opts.tol = 1e-15;
    std::vector<double> point(kTriadTypeCount, 0.0);
    point[0] = 1.0;  // rotating mass never settles in two iterations
    opts.start = point;
    CHECK_THROWS_AS(stationary(m, opts), AnalysisError);

    StationaryOptions bad;
    bad.tol = 0.0;
    CHECK_THROWS_AS(stationary(m, bad), InputError);
}

TEST_CASE("stationary: doubly stochastic matrices have uniform fixed points") {
    // Symmetric circulant: rows and columns both sum to 1.
    TransitionMatrix m;
    for (int i = 0; i < kTriadTypeCount; ++i) {
        m.at(i, i) = 0.5;
        m.at(i, (i + 1) % kTriadTypeCount) = 0.25;
        m.at(i, (i + kTriadTypeCount - 1) % kTriadTypeCount) = 0.25;
    }
    const std::vector<double> pi = stationary(m);
    for (double v : pi) CHECK(v == doctest::Approx(1.0 / kTriadTypeCount).epsilon(1e-8));

    double sum = 0.0;
    for (double v : pi) sum += v;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("frobenius_diff_series norms consecutive differences") {
    std::mt19937_64 rng(7);
    const TransitionMatrix m = random_stochastic(rng);
    {
        const std::vector<TransitionMatrix> same = {m, m, m};
        const ScalarSeries s = frobenius_diff_series(same);
        REQUIRE(s.size() == 2);
        CHECK(*s.values[0] == doctest::Approx(0.0));
        CHECK(*s.values[1] == doctest::Approx(0.0));
    }
    {
        TransitionMatrix shifted = m;
        // Move 0.1 of mass between two entries of one row: norm sqrt(0.02).
        shifted.at(0, 0) += 0.1;
        shifted.at(0, 1) -= 0.1;
        const std::vector<TransitionMatrix> pair = {m, shifted};
        const ScalarSeries s = frobenius_diff_series(pair);
        REQUIRE(s.size() == 1);
        CHECK(*s.values[0] == doctest::Approx(std::sqrt(0.02)).epsilon(1e-12));
    }
    {
        std::vector<TransitionMatrix> many(101, m);
        for (int i = 0; i < 101; ++i) many[i].from_period = i;
        CHECK(frobenius_diff_series(many).size() == 100);
    }
    const std::vector<TransitionMatrix> single = {m};
    CHECK_THROWS_AS(frobenius_diff_series(single), InputError);
}

TEST_CASE("frobenius series is covariant under a common type relabeling") {
    std::mt19937_64 rng(9);
    std::vector<TransitionMatrix> mats = {random_stochastic(rng), random_stochastic(rng),
                                          random_stochastic(rng)};
    // A fixed permutation of type labels applied to rows and columns alike.
    std::vector<int> perm(kTriadTypeCount);
    for (int i = 0; i < kTriadTypeCount; ++i) perm[i] = (i * 7 + 3) % kTriadTypeCount;
    std::vector<TransitionMatrix> relabeled = mats;
    for (std::size_t t = 0; t < mats.size(); ++t) {
        for (int i = 0; i < kTriadTypeCount; ++i) {
            for (int j = 0; j < kTriadTypeCount; ++j) {
                relabeled[t].at(perm[i], perm[j]) = mats[t].at(i, j);
            }
        }
    }
    const ScalarSeries a = frobenius_diff_series(mats);
    const ScalarSeries b = frobenius_diff_series(relabeled);
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(*a.values[k] == doctest::Approx(*b.values[k]).epsilon(1e-12));
    }
}

TEST_CASE("quadrant_summary pools destination mass by balance flag") {
    const TriadTypeTable table = build_type_table();

    {
        const std::vector<TransitionMatrix> ident = {identity_matrix()};
        const QuadrantSummary q = quadrant_summary(ident, table, BalanceModel::Transitivity);
        CHECK(q.bb.min == doctest::Approx(1.0));
        CHECK(q.bb.max == doctest::Approx(1.0));
        CHECK(q.uu.min == doctest::Approx(1.0));
        CHECK(q.uu.max == doctest::Approx(1.0));
        CHECK(q.bu.max == doctest::Approx(0.0));
        CHECK(q.ub.max == doctest::Approx(0.0));
        CHECK(q.bb.count + q.ub.count == kTriadTypeCount);
    }
    {
        // Every type jumps to the all-null type (balanced under every model).
        TransitionMatrix junp;
        const TriadTypeTable& t = table;
        const int null_type = t.type_of[364];
        for (int i = 0; i < kTriadTypeCount; ++i) junp.at(i, null_type) = 1.0;
        const std::vector<TransitionMatrix> mats = {junp};
        const QuadrantSummary q = quadrant_summary(mats, t, BalanceModel::Classical);
        CHECK(q.ub.min == doctest::Approx(1.0));
        CHECK(q.bb.min == doctest::Approx(1.0));
        CHECK(q.uu.max == doctest::Approx(0.0));
    }
    {
        std::mt19937_64 rng(11);
        const std::vector<TransitionMatrix> mats = {random_stochastic(rng)};
        for (BalanceModel model : kAllBalanceModels) {
            const QuadrantSummary q = quadrant_summary(mats, table, model);
            // Row-wise (->B) + (->U) = 1 transfers to the pooled extremes.
            CHECK(q.bb.min + q.bu.max == doctest::Approx(1.0).epsilon(1e-9));
            CHECK(q.bb.max + q.bu.min == doctest::Approx(1.0).epsilon(1e-9));
            CHECK(q.ub.min + q.uu.max == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("five_number_summary uses linear quartile interpolation") {
    const FiveNumberSummary s = five_number_summary({4.0, 1.0, 3.0, 2.0});
    CHECK(s.min == 1.0);
    CHECK(s.q1 == doctest::Approx(1.75));
    CHECK(s.median == doctest::Approx(2.5));
    CHECK(s.q3 == doctest::Approx(3.25));
    CHECK(s.max == 4.0);
    CHECK(s.count == 4);
}
