#include "triadyn/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <unordered_map>

#include "triadyn/error.hpp"
#include "triadyn/io.hpp"

namespace triadyn {

namespace {

char resolve_delimiter(Delimiter d, std::string_view header) {
    switch (d) {
        case Delimiter::Comma: return ',';
        case Delimiter::Tab: return '\t';
        case Delimiter::Auto: return detect_delimiter(header);
    }
    return ',';
}

// Strict, locale-independent double parse: whole field, finite result.
bool parse_weight(const std::string& field, double& out) {
    std::size_t begin = 0, end = field.size();
    while (begin < end && (field[begin] == ' ' || field[begin] == '\t')) ++begin;
    while (end > begin && (field[end - 1] == ' ' || field[end - 1] == '\t')) --end;
    if (begin == end) return false;
    const auto [ptr, ec] = std::from_chars(field.data() + begin, field.data() + end, out);
    if (ec != std::errc{} || ptr != field.data() + end) return false;
    return std::isfinite(out);
}

std::size_t find_column(const std::vector<std::string>& header, const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    throw InputError("missing column '" + name + "' in header");
}

}  // namespace

namespace {

void strip_bom(std::string& line) {
    if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
}

}  // namespace

EventLog parse_events(std::istream& in, const ParseOptions& opts, ParseReport* report) {
    std::string line;
    if (!std::getline(in, line)) throw InputError("no events: empty input");
    strip_bom(line);
    const char delim = resolve_delimiter(opts.delimiter, line);
    const auto header = split_delimited(line, delim);
    const std::size_t col_date = find_column(header, opts.columns.date);
    const std::size_t col_source = find_column(header, opts.columns.source);
    const std::size_t col_target = find_column(header, opts.columns.target);
    const std::size_t col_weight = find_column(header, opts.columns.weight);
    const std::size_t need = std::max({col_date, col_source, col_target, col_weight}) + 1;

    EventLog log;
    ParseReport rep;
    std::unordered_map<std::string, std::int32_t> index_of;

    auto intern = [&](const std::string& id) -> std::int32_t {
        auto [it, inserted] = index_of.try_emplace(id, static_cast<std::int32_t>(log.actor_registry.size()));
        if (inserted) log.actor_registry.push_back(id);
        return it->second;
    };

    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        ++rep.rows_total;
        const auto fields = split_delimited(line, delim);
        double weight = 0.0;
        std::optional<Date> date;
        if (fields.size() >= need) {
            date = parse_date(fields[col_date], opts.date_format);
        }
        const bool weight_ok = fields.size() >= need && parse_weight(fields[col_weight], weight) &&
                               weight >= -10.0 && weight <= 10.0;
        if (!date || !weight_ok) {
            ++rep.rows_invalid;
            if (rep.invalid_samples.size() < 5) rep.invalid_samples.push_back(line);
            continue;
        }
        if (fields[col_source] == fields[col_target]) {
            ++rep.self_loops_dropped;
            continue;
        }
        Event ev;
        ev.day = static_cast<std::int32_t>(days_from_civil(*date));
        // Source interned before target so registry order is first appearance.
        ev.source = intern(fields[col_source]);
        ev.target = intern(fields[col_target]);
        ev.weight = weight;
        log.events.push_back(ev);
        ++rep.rows_kept;
    }

    if (rep.rows_total == 0) throw InputError("no events: input has a header but no data rows");
    if (rep.rows_invalid * 2 > rep.rows_total) {
        std::string msg = "malformed input: " + std::to_string(rep.rows_invalid) + " of " +
                          std::to_string(rep.rows_total) + " rows unparseable";
        for (const auto& s : rep.invalid_samples) msg += "\n  sample: " + s;
        throw InputError(msg);
    }
    if (log.events.empty()) throw InputError("no events: every row was dropped");
    if (report) *report = rep;
    return log;
}

ScalarSeries parse_series(std::istream& in, Delimiter delimiter) {
    std::string line;
    if (!std::getline(in, line)) throw InputError("empty series input");
    strip_bom(line);
    const char delim = resolve_delimiter(delimiter, line);

    ScalarSeries series;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_delimited(line, delim);
        if (fields.size() < 2) {
            throw InputError("series row " + std::to_string(row) + " has fewer than 2 columns");
        }
        const std::string& label = fields[0];
        if (std::find(series.labels.begin(), series.labels.end(), label) != series.labels.end()) {
            throw InputError("duplicate series label '" + label + "' at row " + std::to_string(row));
        }
        series.labels.push_back(label);
        if (fields[1].empty()) {
            series.values.push_back(std::nullopt);
        } else {
            double v = 0.0;
            if (!parse_weight(fields[1], v)) {
                throw InputError("non-numeric series value '" + fields[1] + "' at row " +
                                 std::to_string(row));
            }
            series.values.push_back(v);
        }
    }
    if (series.labels.empty()) throw InputError("empty series input: no data rows");
    return series;
}

PeriodBuckets bin_periods(const EventLog& log, const PeriodSpec& spec) {
    if (spec.length_days < 1) throw InputError("period length must be >= 1 day");
    if (!is_valid_date(spec.start)) throw InputError("invalid period start date");
    if (spec.count != kAutoPeriodCount && spec.count < 1) {
        throw InputError("period count must be positive or auto");
    }
    if (log.events.empty()) throw InputError("cannot bin an empty event log");

    const std::int64_t start_day = days_from_civil(spec.start);
    const std::int64_t len = spec.length_days;

    std::int64_t period_count;
    if (spec.count == kAutoPeriodCount) {
        std::int32_t max_day = log.events.front().day;
        for (const Event& ev : log.events) max_day = std::max(max_day, ev.day);
        const std::int64_t span_days = max_day - start_day + 1;  // span covered by data
        if (span_days <= 0) throw InputError("zero periods covered: all events precede the start date");
        period_count = spec.keep_tail ? (span_days + len - 1) / len : span_days / len;
        if (period_count == 0) {
            throw InputError("zero periods covered: event span (" + std::to_string(span_days) +
                             " days) is shorter than one period");
        }
    } else {
        period_count = spec.count;
    }

    PeriodBuckets out;
    out.start = spec.start;
    out.length_days = spec.length_days;
    out.buckets.assign(static_cast<std::size_t>(period_count), {});
    for (std::uint32_t idx = 0; idx < log.events.size(); ++idx) {
        const std::int64_t offset = log.events[idx].day - start_day;
        if (offset < 0 || offset >= period_count * len) {
            ++out.excluded;
            continue;
        }
        out.buckets[static_cast<std::size_t>(offset / len)].push_back(idx);
    }
    return out;
}

}  // namespace triadyn
