#pragma once

#include <span>
#include <string>
#include <vector>

#include "triadyn/markov.hpp"

namespace triadyn {

enum class PenaltyMode {
    Matrix,     // lambda2 * Frobenius norm of each difference matrix
    RowGroups,  // lambda2 * sum of row-wise l2 norms of each difference matrix
};

struct SolverConfig {
    double lambda1 = 0.5;        // l1 weight on consecutive differences
    double lambda2 = 0.05;       // group (Frobenius) weight on consecutive differences
    double epsilon_floor = 1e-9; // relaxation of the strict-positivity constraint
    double tol = 1e-9;           // relative objective tolerance (50-iteration window)
    int max_iters = 25000;
    PenaltyMode penalty_mode = PenaltyMode::Matrix;
};

// (1/2T) sum_t ||Phat_t - P_t||_F^2
//   + sum_{t>=2} [ lambda1 ||P_t - P_{t-1}||_1 + lambda2 ||P_t - P_{t-1}||_(2) ]
// where ||.||_1 is the entrywise absolute sum and ||.||_(2) depends on mode.
double objective(std::span<const TransitionMatrix> p_seq,
                 std::span<const TransitionMatrix> phat_seq, double lambda1, double lambda2,
                 PenaltyMode mode = PenaltyMode::Matrix);

// Exact Euclidean projection onto {p : p_i >= floor, sum p_i = 1}, in place,
// by the sorting-based threshold on the shifted simplex. Requires
// floor*len < 1.
void project_row_simplex(std::span<double> v, double floor);

struct SolveResult {
    std::vector<TransitionMatrix> matrices;
    // Best feasible objective value seen up to each iteration (non-increasing).
    std::vector<double> objective_trace;
    double final_objective = 0.0;
    bool converged = false;
    int iterations = 0;
    std::string message;
};

// Estimates the smoothly time-varying transition matrices by ADMM: the
// fidelity term is handled by per-entry tridiagonal solves along time, the
// sparse-group penalty by its closed-form prox (entrywise soft threshold
// followed by group shrinkage), and the constraints by exact row-simplex
// projection. The returned matrices are always feasible; when lambda1 =
// lambda2 = 0 (or T = 1) the problem separates and the exact projection of
// each empirical matrix is returned directly.
//
// Per-row and per-entry steps run in parallel; every floating-point
// reduction accumulates per-period partials in fixed index order, so the
// result does not depend on the thread count.
SolveResult estimate(std::span<const TransitionMatrix> phat_seq, const SolverConfig& config);

// sum_{t>=2} ||P_t - P_{t-1}||_1 (entrywise).
double total_variation(std::span<const TransitionMatrix> p_seq);

}  // namespace triadyn
