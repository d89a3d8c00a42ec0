#pragma once

#include <optional>
#include <span>
#include <vector>

#include "triadyn/series.hpp"
#include "triadyn/triads.hpp"

namespace triadyn {

// Row-stochastic 138x138 triad-type transition matrix.
struct TransitionMatrix {
    std::vector<double> p;  // kTriadTypeCount^2, row-major
    int from_period = 0;

    TransitionMatrix()
        : p(static_cast<std::size_t>(kTriadTypeCount) * kTriadTypeCount, 0.0) {}
    double& at(int i, int j) { return p[static_cast<std::size_t>(i) * kTriadTypeCount + j]; }
    double at(int i, int j) const { return p[static_cast<std::size_t>(i) * kTriadTypeCount + j]; }
};

enum class ZeroRowPolicy { Identity, Uniform };

// Row i = counts_i / rowsum_i; a zero row becomes the basis row e_i
// (Identity) or the uniform row (Uniform).
TransitionMatrix normalize_rows(const TransitionCounts& counts,
                                ZeroRowPolicy policy = ZeroRowPolicy::Identity);

// Entrywise arithmetic mean; from_period taken from the first matrix.
TransitionMatrix average_transition(std::span<const TransitionMatrix> mats);

struct StationaryOptions {
    double tol = 1e-12;
    double smoothing_epsilon = 1e-8;
    int max_iters = 100000;
    // Start vector for the power iteration (uniform when absent). With the
    // default smoothing the fixed point is unique and the start only affects
    // iteration count; with epsilon = 0 on a reducible chain it selects the
    // reachable component.
    std::optional<std::vector<double>> start;
};

// Fixed point of pi = pi * P' with P' = (1-eps) P + eps/n. Throws
// AnalysisError with the residual if the iteration cap is hit.
std::vector<double> stationary(const TransitionMatrix& mat, const StationaryOptions& opts = {});

// value k = ||P_{k+1} - P_k||_F, labeled by the later matrix's from_period.
ScalarSeries frobenius_diff_series(std::span<const TransitionMatrix> mats);

struct FiveNumberSummary {
    double min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0;
    std::size_t count = 0;
};

// Per-(matrix, from-type) destination mass aggregated into balanced vs
// unbalanced under one model, pooled into the four quadrant distributions.
struct QuadrantSummary {
    BalanceModel model = BalanceModel::Transitivity;
    FiveNumberSummary bb, bu, ub, uu;
};

QuadrantSummary quadrant_summary(std::span<const TransitionMatrix> mats,
                                 const TriadTypeTable& table, BalanceModel model);

// Quartiles by linear interpolation at rank q*(n-1) over the sorted sample.
FiveNumberSummary five_number_summary(std::vector<double> values);

}  // namespace triadyn
