#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "triadyn/series.hpp"

namespace triadyn {

enum class AlignMode { Annualize, Interpolate };
const char* align_mode_name(AlignMode mode);

struct AlignOptions {
    AlignMode mode = AlignMode::Annualize;
    bool invert_b = false;  // elementwise 1/x on series b before alignment
};

struct PairedSample {
    std::vector<double> a;
    std::vector<double> b;
    std::vector<std::string> labels;

    std::size_t size() const { return a.size(); }
};

// Pairs two labeled series on a common time axis, dropping missing values.
// Identical label sequences zip directly. Otherwise Annualize averages both
// series within the calendar year leading each label and matches years;
// Interpolate evaluates series b linearly at a's time positions (year-only
// labels sit at mid-year). Throws InputError/AnalysisError when fewer than 3
// pairs survive.
PairedSample align_series(const ScalarSeries& a, const ScalarSeries& b,
                          const AlignOptions& options = {});

struct PearsonResult {
    double r = 0.0;
    double p = 1.0;
    std::size_t n = 0;
};

// Sample correlation with the two-sided p-value of t = r sqrt((n-2)/(1-r^2))
// on n-2 degrees of freedom. Throws AnalysisError on constant input.
PearsonResult pearson(std::span<const double> a, std::span<const double> b);

struct GrangerResult {
    std::string direction;
    int lags = 1;
    double f_stat = 0.0;
    double f_p = 1.0;
    double chi2_stat = 0.0;
    double chi2_p = 1.0;
    std::size_t n_used = 0;  // OLS observations after lag trimming
};

// Tests "x Granger-causes y" by nested OLS: the restricted model regresses
// y_t on its own lags, the unrestricted model adds lags of x.
// F = ((RSS_r - RSS_u)/lags) / (RSS_u/(n - 2 lags - 1)); the chi-square
// variant uses lags*F with `lags` dof. Throws AnalysisError on rank-deficient
// designs (e.g. constant series).
GrangerResult granger(std::span<const double> x, std::span<const double> y, int lags);

struct StabilityReport {
    PearsonResult pearson;
    std::optional<GrangerResult> granger_xy;  // exogenous -> stability
    std::optional<GrangerResult> granger_yx;  // stability -> exogenous
    std::string granger_xy_error;             // set when that direction is degenerate
    std::string granger_yx_error;
    AlignMode alignment = AlignMode::Annualize;
    bool inverted_exogenous = false;
    std::size_t aligned_n = 0;
};

// Aligns the stability (Frobenius) series with the exogenous series and runs
// Pearson plus Granger in both directions. Alignment and Pearson failures
// propagate; a degenerate Granger design (e.g. the two series are identical,
// making the lagged columns collinear) is reported per direction instead of
// discarding the correlation result.
StabilityReport stability_vs_exogenous(const ScalarSeries& frob, const ScalarSeries& exo,
                                       const AlignOptions& options = {}, int lags = 1);

}  // namespace triadyn
