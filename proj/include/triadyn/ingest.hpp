#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "triadyn/date.hpp"
#include "triadyn/series.hpp"

namespace triadyn {

// One timestamped, weighted, directed appraisal between two registry actors.
// Timestamps are stored as days since 1970-01-01 (day resolution).
struct Event {
    std::int32_t day = 0;
    std::int32_t source = 0;  // registry index
    std::int32_t target = 0;  // registry index
    double weight = 0.0;

    Date date() const { return civil_from_days(day); }
};

struct EventLog {
    std::vector<Event> events;                 // input order
    std::vector<std::string> actor_registry;   // index -> id, first-appearance order
};

enum class Delimiter { Auto, Comma, Tab };

struct ColumnMapping {
    std::string date = "date";
    std::string source = "source";
    std::string target = "target";
    std::string weight = "weight";
};

struct ParseOptions {
    ColumnMapping columns;
    Delimiter delimiter = Delimiter::Auto;
    std::string date_format = "%Y-%m-%d";
};

struct ParseReport {
    std::size_t rows_total = 0;          // data rows (header excluded)
    std::size_t rows_kept = 0;
    std::size_t self_loops_dropped = 0;
    std::size_t rows_invalid = 0;        // unparseable date/weight or short rows
    std::vector<std::string> invalid_samples;  // up to 5 offending rows
};

// Header row is required. Rows with an invalid date or weight and rows with
// too few fields are counted and skipped; self-loop rows are dropped and
// counted separately. Weights must be finite and inside [-10, +10]. Throws
// InputError when there are no data rows, when a mapped column is missing,
// or when more than half of the rows are invalid.
EventLog parse_events(std::istream& in, const ParseOptions& opts, ParseReport* report = nullptr);

// Two-column (label, value) delimited text with a header row. Blank value
// cells become explicit missing markers. Throws InputError on duplicate
// labels, non-numeric values, or empty input.
ScalarSeries parse_series(std::istream& in, Delimiter delimiter = Delimiter::Auto);

inline constexpr int kAutoPeriodCount = -1;

struct PeriodSpec {
    Date start;
    int length_days = 84;
    int count = kAutoPeriodCount;  // kAutoPeriodCount covers the full event span
    bool keep_tail = false;        // keep a trailing partial period (auto count only)
};

struct PeriodBuckets {
    std::vector<std::vector<std::uint32_t>> buckets;  // event indices per period
    std::size_t excluded = 0;                         // events outside the covered span
    Date start;
    int length_days = 0;

    Date period_start(int k) const {
        return civil_from_days(days_from_civil(start) + static_cast<std::int64_t>(k) * length_days);
    }
};

// Half-open periods [start + k*L, start + (k+1)*L). Every event inside the
// covered span lands in exactly one bucket; events outside are excluded and
// counted. Throws InputError on an invalid spec, an empty log, or when zero
// periods are covered.
PeriodBuckets bin_periods(const EventLog& log, const PeriodSpec& spec);

}  // namespace triadyn
