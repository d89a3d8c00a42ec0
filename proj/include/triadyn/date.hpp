#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace triadyn {

// Proleptic Gregorian calendar date, day resolution.
struct Date {
    int year = 1970;
    int month = 1;  // 1..12
    int day = 1;    // 1..31

    friend bool operator==(const Date&, const Date&) = default;
    friend auto operator<=>(const Date&, const Date&) = default;
};

bool is_valid_date(const Date& d);

// Days since 1970-01-01; negative before the epoch.
std::int64_t days_from_civil(const Date& d);
Date civil_from_days(std::int64_t z);

// Parses `text` against a strftime-style pattern. Supported conversions:
// %Y (year, 1-6 digits), %m (month, 1-2 digits), %d (day, 1-2 digits), %%.
// Every other pattern character must match literally; the whole input must
// be consumed. Returns nullopt on any mismatch or invalid calendar date.
std::optional<Date> parse_date(std::string_view text, std::string_view pattern = "%Y-%m-%d");

// ISO-8601 YYYY-MM-DD.
std::string format_date(const Date& d);

}  // namespace triadyn
