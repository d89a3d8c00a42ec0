#include "triadyn/markov.hpp"

#include <algorithm>
#include <cmath>

#include "triadyn/error.hpp"

namespace triadyn {

TransitionMatrix normalize_rows(const TransitionCounts& counts, ZeroRowPolicy policy) {
    TransitionMatrix mat;
    mat.from_period = counts.from_period;
    for (int i = 0; i < kTriadTypeCount; ++i) {
        std::int64_t rowsum = 0;
        for (int j = 0; j < kTriadTypeCount; ++j) rowsum += counts.at(i, j);
        if (rowsum > 0) {
            for (int j = 0; j < kTriadTypeCount; ++j) {
                mat.at(i, j) = static_cast<double>(counts.at(i, j)) / static_cast<double>(rowsum);
            }
        } else if (policy == ZeroRowPolicy::Identity) {
            mat.at(i, i) = 1.0;
        } else {
            for (int j = 0; j < kTriadTypeCount; ++j) mat.at(i, j) = 1.0 / kTriadTypeCount;
        }
    }
    return mat;
}

TransitionMatrix average_transition(std::span<const TransitionMatrix> mats) {
    if (mats.empty()) throw InputError("average_transition: empty sequence");
    TransitionMatrix mean;
    mean.from_period = mats.front().from_period;
    const double inv = 1.0 / static_cast<double>(mats.size());
    for (const TransitionMatrix& m : mats) {
        for (std::size_t k = 0; k < mean.p.size(); ++k) mean.p[k] += m.p[k];
    }
    for (double& v : mean.p) v *= inv;
    return mean;
}

std::vector<double> stationary(const TransitionMatrix& mat, const StationaryOptions& opts) {
    if (opts.tol <= 0) throw InputError("stationary: tol must be positive");
    const int n = kTriadTypeCount;
    std::vector<double> pi(n, 1.0 / n);
    if (opts.start) {
        if (static_cast<int>(opts.start->size()) != n) {
            throw InputError("stationary: start vector has wrong length");
        }
        pi = *opts.start;
    }
    const double eps = opts.smoothing_epsilon;
    std::vector<double> next(n);
    for (int iter = 0; iter < opts.max_iters; ++iter) {
        // next = (1-eps) * pi P + eps/n * sum(pi); sum(pi) stays 1.
        std::fill(next.begin(), next.end(), 0.0);
        for (int i = 0; i < n; ++i) {
            const double w = pi[i];
            if (w == 0.0) continue;
            const double* row = &mat.p[static_cast<std::size_t>(i) * n];
            for (int j = 0; j < n; ++j) next[j] += w * row[j];
        }
        double mass = 0.0;
        for (int j = 0; j < n; ++j) {
            next[j] = (1.0 - eps) * next[j] + eps / n;
            mass += next[j];
        }
        for (int j = 0; j < n; ++j) next[j] /= mass;
        double residual = 0.0;
        for (int j = 0; j < n; ++j) residual += std::abs(next[j] - pi[j]);
        pi.swap(next);
        if (residual < opts.tol) return pi;
    }
    double residual = 0.0;
    for (int j = 0; j < n; ++j) residual += std::abs(next[j] - pi[j]);
    throw AnalysisError("stationary: power iteration did not converge in " +
                        std::to_string(opts.max_iters) +
                        " iterations (l1 residual " + std::to_string(residual) + ")");
}

ScalarSeries frobenius_diff_series(std::span<const TransitionMatrix> mats) {
    if (mats.size() < 2) throw InputError("frobenius_diff_series: need at least 2 matrices");
    ScalarSeries series;
    for (std::size_t k = 0; k + 1 < mats.size(); ++k) {
        double sq = 0.0;
        for (std::size_t e = 0; e < mats[k].p.size(); ++e) {
            const double d = mats[k + 1].p[e] - mats[k].p[e];
            sq += d * d;
        }
        series.labels.push_back(std::to_string(mats[k + 1].from_period));
        series.values.push_back(std::sqrt(sq));
    }
    return series;
}

FiveNumberSummary five_number_summary(std::vector<double> values) {
    FiveNumberSummary s;
    s.count = values.size();
    if (values.empty()) return s;
    std::sort(values.begin(), values.end());
    auto quantile = [&](double q) {
        const double rank = q * static_cast<double>(values.size() - 1);
        const std::size_t lo = static_cast<std::size_t>(rank);
        const std::size_t hi = std::min(lo + 1, values.size() - 1);
        const double frac = rank - static_cast<double>(lo);
        return values[lo] * (1.0 - frac) + values[hi] * frac;
    };
    s.min = values.front();
    s.q1 = quantile(0.25);
    s.median = quantile(0.5);
    s.q3 = quantile(0.75);
    s.max = values.back();
    return s;
}

QuadrantSummary quadrant_summary(std::span<const TransitionMatrix> mats,
                                 const TriadTypeTable& table, BalanceModel model) {
    if (mats.empty()) throw InputError("quadrant_summary: empty sequence");
    std::vector<double> bb, bu, ub, uu;
    for (const TransitionMatrix& m : mats) {
        for (int i = 0; i < kTriadTypeCount; ++i) {
            double to_balanced = 0.0, to_unbalanced = 0.0;
            for (int j = 0; j < kTriadTypeCount; ++j) {
                (table.is_balanced(j, model) ? to_balanced : to_unbalanced) += m.at(i, j);
            }
            if (table.is_balanced(i, model)) {
                bb.push_back(to_balanced);
                bu.push_back(to_unbalanced);
            } else {
                ub.push_back(to_balanced);
                uu.push_back(to_unbalanced);
            }
        }
    }
    QuadrantSummary out;
    out.model = model;
    out.bb = five_number_summary(std::move(bb));
    out.bu = five_number_summary(std::move(bu));
    out.ub = five_number_summary(std::move(ub));
    out.uu = five_number_summary(std::move(uu));
    return out;
}

}  // namespace triadyn
