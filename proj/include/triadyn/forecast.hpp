#pragma once

#include <array>
#include <span>
#include <utility>
#include <vector>

#include "triadyn/tvsolver.hpp"

namespace triadyn {

// prop_prev as a row vector times P; preserves the probability simplex.
std::vector<double> forecast_one_step(std::span<const double> prop_prev,
                                      const TransitionMatrix& P);

double rmse(std::span<const double> pred, std::span<const double> truth);

enum class ForecastMethod : int {
    TimeVarying = 0,
    IndividualMarkov = 1,
    LastProportion = 2,
    AverageProportion = 3,
};
inline constexpr int kForecastMethodCount = 4;
const char* forecast_method_name(ForecastMethod m);

struct ForecastReport {
    std::vector<int> steps;  // forecast target period indices, walking forward
    std::array<std::vector<double>, kForecastMethodCount> rmse_by_method;
    int nonconverged_solves = 0;

    double mean_rmse(ForecastMethod m) const;
};

// Walk-forward one-step-ahead evaluation over the last `holdout_steps`
// periods. For target period s every method sees only data with index < s:
//   time-varying       retrain the solver on the empirical-matrix prefix and
//                      forecast with the last estimated matrix
//   individual-markov  forecast with the last empirical matrix of the prefix
//   last-proportion    predict prop_{s-1}
//   average-proportion predict the mean of prop_0..prop_{s-1}
// `phat_seq[t]` must be the empirical matrix for the transition t -> t+1, so
// phat_seq.size() == prop_seq.size() - 1. When `metric_support` is non-empty
// the RMSE is computed over those type indices only.
ForecastReport evaluate_methods(std::span<const std::vector<double>> prop_seq,
                                std::span<const TransitionMatrix> phat_seq,
                                const SolverConfig& config, int holdout_steps,
                                std::span<const int> metric_support = {});

// Grid values spanning the defaults used throughout: lambda1 in
// {0.05, 0.1, 0.5, 1, 5} x lambda2 in {0.005, 0.05, 0.5}.
std::vector<std::pair<double, double>> default_hyperparameter_grid();

// Walk-forward validation of the time-varying method over `validation_steps`
// held-out periods; returns the pair with the smallest mean RMSE, ties broken
// by larger lambda1 then larger lambda2.
std::pair<double, double> tune_hyperparams(std::span<const std::vector<double>> prop_seq,
                                           std::span<const TransitionMatrix> phat_seq,
                                           std::span<const std::pair<double, double>> grid,
                                           int validation_steps, const SolverConfig& base);

}  // namespace triadyn
