#include "triadyn/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>

#include "triadyn/date.hpp"
#include "triadyn/error.hpp"
#include "triadyn/specfun.hpp"

namespace triadyn {

const char* align_mode_name(AlignMode mode) {
    return mode == AlignMode::Annualize ? "annualize" : "interpolate";
}

namespace {

std::optional<int> leading_year(const std::string& label) {
    int value = 0;
    int digits = 0;
    for (char c : label) {
        if (c < '0' || c > '9') break;
        value = value * 10 + (c - '0');
        if (++digits > 6) return std::nullopt;
    }
    if (digits < 1) return std::nullopt;
    return value;
}

// Time position in days for interpolation; year-only labels sit at mid-year.
std::optional<double> time_position(const std::string& label) {
    if (auto d = parse_date(label)) return static_cast<double>(days_from_civil(*d));
    if (auto y = leading_year(label)) {
        return static_cast<double>(days_from_civil(Date{*y, 7, 1}));
    }
    return std::nullopt;
}

ScalarSeries invert_series(const ScalarSeries& s) {
    ScalarSeries out;
    out.labels = s.labels;
    out.values.reserve(s.values.size());
    for (const auto& v : s.values) {
        if (v && *v != 0.0) {
            out.values.push_back(1.0 / *v);
        } else {
            out.values.push_back(std::nullopt);  // 1/0 is marked missing, not inf
        }
    }
    return out;
}

// year -> mean of present values whose label starts with that year.
std::map<int, double> annual_means(const ScalarSeries& s) {
    std::map<int, std::pair<double, int>> acc;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!s.values[i]) continue;
        const auto year = leading_year(s.labels[i]);
        if (!year) throw InputError("align_series: label '" + s.labels[i] + "' has no leading year");
        auto& slot = acc[*year];
        slot.first += *s.values[i];
        slot.second += 1;
    }
    std::map<int, double> means;
    for (const auto& [year, slot] : acc) {
        means[year] = slot.first / static_cast<double>(slot.second);
    }
    return means;
}

}  // namespace

PairedSample align_series(const ScalarSeries& a, const ScalarSeries& b_raw,
                          const AlignOptions& options) {
    if (a.size() == 0 || b_raw.size() == 0) throw InputError("align_series: empty series");
    const ScalarSeries b = options.invert_b ? invert_series(b_raw) : b_raw;

    PairedSample out;
    if (a.labels == b.labels) {
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (a.values[i] && b.values[i]) {
                out.a.push_back(*a.values[i]);
                out.b.push_back(*b.values[i]);
                out.labels.push_back(a.labels[i]);
            }
        }
    } else if (options.mode == AlignMode::Annualize) {
        const auto mean_a = annual_means(a);
        const auto mean_b = annual_means(b);
        for (const auto& [year, va] : mean_a) {
            const auto it = mean_b.find(year);
            if (it == mean_b.end()) continue;
            out.a.push_back(va);
            out.b.push_back(it->second);
            out.labels.push_back(std::to_string(year));
        }
    } else {
        // Linear interpolation of b at a's time positions, inside b's hull.
        std::vector<std::pair<double, double>> knots;
        for (std::size_t i = 0; i < b.size(); ++i) {
            if (!b.values[i]) continue;
            const auto pos = time_position(b.labels[i]);
            if (!pos) throw InputError("align_series: unparseable label '" + b.labels[i] + "'");
            knots.emplace_back(*pos, *b.values[i]);
        }
        std::sort(knots.begin(), knots.end());
        if (knots.size() < 2) throw AnalysisError("align_series: need at least 2 values to interpolate");
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (!a.values[i]) continue;
            const auto pos = time_position(a.labels[i]);
            if (!pos) throw InputError("align_series: unparseable label '" + a.labels[i] + "'");
            if (*pos < knots.front().first || *pos > knots.back().first) continue;
            auto hi = std::lower_bound(knots.begin(), knots.end(), std::make_pair(*pos, -1e300));
            if (hi == knots.begin()) hi = knots.begin() + 1;
            if (hi == knots.end()) hi = knots.end() - 1;
            const auto lo = hi - 1;
            const double span = hi->first - lo->first;
            const double w = span > 0 ? (*pos - lo->first) / span : 0.0;
            out.a.push_back(*a.values[i]);
            out.b.push_back(lo->second * (1.0 - w) + hi->second * w);
            out.labels.push_back(a.labels[i]);
        }
    }
    if (out.size() < 3) {
        throw AnalysisError("align_series: fewer than 3 aligned pairs (" +
                            std::to_string(out.size()) + ")");
    }
    return out;
}

PearsonResult pearson(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw InputError("pearson: length mismatch");
    const std::size_t n = a.size();
    if (n < 3) throw InputError("pearson: need at least 3 pairs");
    double mean_a = 0.0, mean_b = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mean_a += a[i];
        mean_b += b[i];
    }
    mean_a /= static_cast<double>(n);
    mean_b /= static_cast<double>(n);
    double cov = 0.0, var_a = 0.0, var_b = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double da = a[i] - mean_a;
        const double db = b[i] - mean_b;
        cov += da * db;
        var_a += da * da;
        var_b += db * db;
    }
    if (var_a == 0.0 || var_b == 0.0) throw AnalysisError("pearson: zero variance");
    double r = cov / std::sqrt(var_a * var_b);
    r = std::clamp(r, -1.0, 1.0);

    PearsonResult result;
    result.r = r;
    result.n = n;
    if (std::abs(r) >= 1.0) {
        result.p = 0.0;
    } else {
        const double nu = static_cast<double>(n - 2);
        const double t = r * std::sqrt(nu / (1.0 - r * r));
        result.p = student_t_two_sided_p(t, nu);
    }
    return result;
}

namespace {

// Ordinary least squares via normal equations with diagonally pivoted
// Cholesky; relative pivot tolerance 1e-10 reports rank deficiency instead of
// silently regularizing.
struct OlsFit {
    double rss = 0.0;
};

OlsFit ols(const std::vector<std::vector<double>>& columns, std::span<const double> y) {
    const std::size_t k = columns.size();
    const std::size_t n = y.size();
    std::vector<double> gram(k * k, 0.0), rhs(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i; j < k; ++j) {
            double dot = 0.0;
            for (std::size_t t = 0; t < n; ++t) dot += columns[i][t] * columns[j][t];
            gram[i * k + j] = gram[j * k + i] = dot;
        }
        for (std::size_t t = 0; t < n; ++t) rhs[i] += columns[i][t] * y[t];
    }

    // Pivoted Cholesky: G = L L^T with symmetric row/column pivoting.
    std::vector<std::size_t> perm(k);
    for (std::size_t i = 0; i < k; ++i) perm[i] = i;
    std::vector<double> L(k * k, 0.0);
    std::vector<double> work = gram;
    double max_diag = 0.0;
    for (std::size_t i = 0; i < k; ++i) max_diag = std::max(max_diag, work[i * k + i]);
    const double tol = 1e-10 * std::max(max_diag, 1.0);

    for (std::size_t step = 0; step < k; ++step) {
        std::size_t pivot = step;
        for (std::size_t i = step + 1; i < k; ++i) {
            if (work[perm[i] * k + perm[i]] > work[perm[pivot] * k + perm[pivot]]) pivot = i;
        }
        std::swap(perm[step], perm[pivot]);
        const std::size_t p = perm[step];
        double d = work[p * k + p];
        for (std::size_t j = 0; j < step; ++j) d -= L[p * k + j] * L[p * k + j];
        if (d <= tol) {
            throw AnalysisError("granger: rank-deficient design (constant or collinear series)");
        }
        const double root = std::sqrt(d);
        L[p * k + step] = root;
        for (std::size_t i = step + 1; i < k; ++i) {
            const std::size_t q = perm[i];
            double v = work[q * k + p];
            for (std::size_t j = 0; j < step; ++j) v -= L[q * k + j] * L[p * k + j];
            L[q * k + step] = v / root;
        }
    }

    // Solve L L^T beta_perm = rhs_perm.
    std::vector<double> fwd(k, 0.0), beta_perm(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        double v = rhs[perm[i]];
        for (std::size_t j = 0; j < i; ++j) v -= L[perm[i] * k + j] * fwd[j];
        fwd[i] = v / L[perm[i] * k + i];
    }
    for (std::size_t i = k; i-- > 0;) {
        double v = fwd[i];
        for (std::size_t j = i + 1; j < k; ++j) v -= L[perm[j] * k + i] * beta_perm[j];
        beta_perm[i] = v / L[perm[i] * k + i];
    }
    std::vector<double> beta(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) beta[perm[i]] = beta_perm[i];

    OlsFit fit;
    for (std::size_t t = 0; t < n; ++t) {
        double pred = 0.0;
        for (std::size_t i = 0; i < k; ++i) pred += beta[i] * columns[i][t];
        const double resid = y[t] - pred;
        fit.rss += resid * resid;
    }
    return fit;
}

}  // namespace

GrangerResult granger(std::span<const double> x, std::span<const double> y, int lags) {
    if (lags < 1) throw InputError("granger: lags must be >= 1");
    if (x.size() != y.size()) throw InputError("granger: series lengths differ");
    const std::size_t len = y.size();
    if (len <= static_cast<std::size_t>(3 * lags + 3)) {
        throw InputError("granger: need more than 3*lags + 3 observations");
    }

    const std::size_t n = len - static_cast<std::size_t>(lags);
    std::vector<double> target(n);
    for (std::size_t t = 0; t < n; ++t) target[t] = y[t + lags];

    std::vector<std::vector<double>> restricted;
    restricted.push_back(std::vector<double>(n, 1.0));
    for (int l = 1; l <= lags; ++l) {
        std::vector<double> col(n);
        for (std::size_t t = 0; t < n; ++t) col[t] = y[t + lags - l];
        restricted.push_back(std::move(col));
    }
    std::vector<std::vector<double>> unrestricted = restricted;
    for (int l = 1; l <= lags; ++l) {
        std::vector<double> col(n);
        for (std::size_t t = 0; t < n; ++t) col[t] = x[t + lags - l];
        unrestricted.push_back(std::move(col));
    }

    const double rss_r = ols(restricted, target).rss;
    const double rss_u = ols(unrestricted, target).rss;
    if (rss_u > rss_r * (1.0 + 1e-9) + 1e-12) {
        throw AnalysisError("granger: unrestricted RSS exceeds restricted RSS");
    }

    const double d1 = static_cast<double>(lags);
    const double d2 = static_cast<double>(n) - (2.0 * lags + 1.0);
    if (d2 <= 0) throw InputError("granger: not enough observations for the F test");

    GrangerResult result;
    result.lags = lags;
    result.n_used = n;
    if (rss_u <= 0.0) {
        result.f_stat = std::numeric_limits<double>::infinity();
        result.f_p = 0.0;
        result.chi2_stat = std::numeric_limits<double>::infinity();
        result.chi2_p = 0.0;
        return result;
    }
    result.f_stat = std::max(0.0, (rss_r - rss_u) / d1 / (rss_u / d2));
    result.f_p = f_sf(result.f_stat, d1, d2);
    result.chi2_stat = d1 * result.f_stat;
    result.chi2_p = chi2_sf(result.chi2_stat, d1);
    return result;
}

StabilityReport stability_vs_exogenous(const ScalarSeries& frob, const ScalarSeries& exo,
                                       const AlignOptions& options, int lags) {
    const PairedSample sample = align_series(frob, exo, options);
    StabilityReport report;
    report.alignment = options.mode;
    report.inverted_exogenous = options.invert_b;
    report.aligned_n = sample.size();
    report.pearson = pearson(sample.a, sample.b);
    try {
        GrangerResult r = granger(sample.b, sample.a, lags);
        r.direction = "exogenous->stability";
        report.granger_xy = std::move(r);
    } catch (const std::exception& e) {
        report.granger_xy_error = e.what();
    }
    try {
        GrangerResult r = granger(sample.a, sample.b, lags);
        r.direction = "stability->exogenous";
        report.granger_yx = std::move(r);
    } catch (const std::exception& e) {
        report.granger_yx_error = e.what();
    }
    return report;
}

}  // namespace triadyn
