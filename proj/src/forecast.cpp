#include "triadyn/forecast.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "triadyn/error.hpp"

namespace triadyn {

std::vector<double> forecast_one_step(std::span<const double> prop_prev,
                                      const TransitionMatrix& P) {
    if (prop_prev.size() != static_cast<std::size_t>(kTriadTypeCount)) {
        throw InputError("forecast_one_step: proportion vector has wrong length");
    }
    std::vector<double> pred(kTriadTypeCount, 0.0);
    for (int i = 0; i < kTriadTypeCount; ++i) {
        const double w = prop_prev[i];
        if (w == 0.0) continue;
        for (int j = 0; j < kTriadTypeCount; ++j) {
            pred[j] += w * P.at(i, j);
        }
    }
    return pred;
}

double rmse(std::span<const double> pred, std::span<const double> truth) {
    if (pred.size() != truth.size()) throw InputError("rmse: length mismatch");
    if (pred.empty()) throw InputError("rmse: empty vectors");
    double sq = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double d = pred[i] - truth[i];
        sq += d * d;
    }
    return std::sqrt(sq / static_cast<double>(pred.size()));
}

const char* forecast_method_name(ForecastMethod m) {
    switch (m) {
        case ForecastMethod::TimeVarying: return "time-varying";
        case ForecastMethod::IndividualMarkov: return "individual-markov";
        case ForecastMethod::LastProportion: return "last-proportion";
        case ForecastMethod::AverageProportion: return "average-proportion";
    }
    return "?";
}

double ForecastReport::mean_rmse(ForecastMethod m) const {
    const auto& v = rmse_by_method[static_cast<int>(m)];
    if (v.empty()) return 0.0;
    double sum = 0.0;
    for (double x : v) sum += x;
    return sum / static_cast<double>(v.size());
}

namespace {

double scored_rmse(std::span<const double> pred, std::span<const double> truth,
                   std::span<const int> support) {
    if (support.empty()) return rmse(pred, truth);
    std::vector<double> p, t;
    p.reserve(support.size());
    t.reserve(support.size());
    for (int idx : support) {
        p.push_back(pred[idx]);
        t.push_back(truth[idx]);
    }
    return rmse(p, t);
}

// All four one-step predictions for the period right after the prefix. Taking
// prefixes by value of span keeps every method blind to later data.
struct StepPredictions {
    std::vector<double> time_varying;
    std::vector<double> individual;
    std::vector<double> last;
    std::vector<double> average;
    bool solver_converged = true;
};

StepPredictions predict_next(std::span<const std::vector<double>> prop_prefix,
                             std::span<const TransitionMatrix> phat_prefix,
                             const SolverConfig& config) {
    StepPredictions out;
    const std::vector<double>& prop_last = prop_prefix.back();

    SolveResult solved = estimate(phat_prefix, config);
    out.solver_converged = solved.converged;
    out.time_varying = forecast_one_step(prop_last, solved.matrices.back());

    out.individual = forecast_one_step(prop_last, phat_prefix.back());

    out.last = prop_last;

    out.average.assign(kTriadTypeCount, 0.0);
    for (const auto& prop : prop_prefix) {
        for (int j = 0; j < kTriadTypeCount; ++j) out.average[j] += prop[j];
    }
    for (double& v : out.average) v /= static_cast<double>(prop_prefix.size());
    return out;
}

}  // namespace

ForecastReport evaluate_methods(std::span<const std::vector<double>> prop_seq,
                                std::span<const TransitionMatrix> phat_seq,
                                const SolverConfig& config, int holdout_steps,
                                std::span<const int> metric_support) {
    const int n = static_cast<int>(prop_seq.size());
    if (n < 3) throw InputError("evaluate_methods: need at least 3 periods");
    if (holdout_steps < 1) throw InputError("evaluate_methods: holdout_steps must be >= 1");
    if (phat_seq.size() + 1 != prop_seq.size()) {
        throw InputError("evaluate_methods: expected one empirical matrix per consecutive pair");
    }
    if (n - holdout_steps < 2) {
        throw InputError("evaluate_methods: holdout exceeds available periods (need 2 training periods)");
    }
    for (const auto& prop : prop_seq) {
        if (prop.size() != static_cast<std::size_t>(kTriadTypeCount)) {
            throw InputError("evaluate_methods: proportion vector has wrong length");
        }
    }
    for (int idx : metric_support) {
        if (idx < 0 || idx >= kTriadTypeCount) {
            throw InputError("evaluate_methods: metric support index out of range");
        }
    }

    ForecastReport report;
    for (int s = n - holdout_steps; s < n; ++s) {
        // Prefix of periods < s; the matrix prefix covers transitions up to s-2 -> s-1.
        const StepPredictions preds =
            predict_next(prop_seq.subspan(0, s), phat_seq.subspan(0, s - 1), config);
        if (!preds.solver_converged) ++report.nonconverged_solves;
        const std::vector<double>& truth = prop_seq[s];
        report.steps.push_back(s);
        report.rmse_by_method[0].push_back(scored_rmse(preds.time_varying, truth, metric_support));
        report.rmse_by_method[1].push_back(scored_rmse(preds.individual, truth, metric_support));
        report.rmse_by_method[2].push_back(scored_rmse(preds.last, truth, metric_support));
        report.rmse_by_method[3].push_back(scored_rmse(preds.average, truth, metric_support));
    }
    return report;
}

std::vector<std::pair<double, double>> default_hyperparameter_grid() {
    std::vector<std::pair<double, double>> grid;
    for (double l1 : {0.05, 0.1, 0.5, 1.0, 5.0}) {
        for (double l2 : {0.005, 0.05, 0.5}) {
            grid.emplace_back(l1, l2);
        }
    }
    return grid;
}

std::pair<double, double> tune_hyperparams(std::span<const std::vector<double>> prop_seq,
                                           std::span<const TransitionMatrix> phat_seq,
                                           std::span<const std::pair<double, double>> grid,
                                           int validation_steps, const SolverConfig& base) {
    if (grid.empty()) throw InputError("tune_hyperparams: empty grid");
    std::pair<double, double> best = grid.front();
    double best_score = std::numeric_limits<double>::infinity();
    for (const auto& [l1, l2] : grid) {
        SolverConfig config = base;
        config.lambda1 = l1;
        config.lambda2 = l2;
        const ForecastReport report =
            evaluate_methods(prop_seq, phat_seq, config, validation_steps);
        const double score = report.mean_rmse(ForecastMethod::TimeVarying);
        const bool better =
            score < best_score ||
            (score == best_score && (l1 > best.first || (l1 == best.first && l2 > best.second)));
        if (better) {
            best_score = score;
            best = {l1, l2};
        }
    }
    return best;
}

}  // namespace triadyn
