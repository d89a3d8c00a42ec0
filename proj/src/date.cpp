#include "triadyn/date.hpp"

#include <array>
#include <cstdio>

namespace triadyn {

namespace {

int days_in_month(int year, int month) {
    static constexpr std::array<int, 12> lengths = {31, 28, 31, 30, 31, 30,
                                                    31, 31, 30, 31, 30, 31};
    const bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
    if (month == 2 && leap) return 29;
    return lengths[month - 1];
}

}  // namespace

bool is_valid_date(const Date& d) {
    if (d.month < 1 || d.month > 12) return false;
    if (d.day < 1 || d.day > days_in_month(d.year, d.month)) return false;
    return true;
}

std::int64_t days_from_civil(const Date& d) {
    // Howard Hinnant's civil-days algorithm.
    std::int64_t y = d.year;
    const unsigned m = static_cast<unsigned>(d.month);
    const unsigned dd = static_cast<unsigned>(d.day);
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + dd - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

Date civil_from_days(std::int64_t z) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned dd = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    return Date{static_cast<int>(y + (m <= 2)), static_cast<int>(m), static_cast<int>(dd)};
}

namespace {

bool parse_int_field(std::string_view text, std::size_t& pos, int max_digits, int& out) {
    int value = 0;
    int digits = 0;
    while (pos < text.size() && digits < max_digits && text[pos] >= '0' && text[pos] <= '9') {
        value = value * 10 + (text[pos] - '0');
        ++pos;
        ++digits;
    }
    if (digits == 0) return false;
    out = value;
    return true;
}

}  // namespace

std::optional<Date> parse_date(std::string_view text, std::string_view pattern) {
    Date d{0, 0, 0};
    bool have_y = false, have_m = false, have_d = false;
    std::size_t ti = 0;
    for (std::size_t pi = 0; pi < pattern.size(); ++pi) {
        const char pc = pattern[pi];
        if (pc == '%') {
            if (pi + 1 >= pattern.size()) return std::nullopt;
            const char conv = pattern[++pi];
            switch (conv) {
                case 'Y':
                    if (!parse_int_field(text, ti, 6, d.year)) return std::nullopt;
                    have_y = true;
                    break;
                case 'm':
                    if (!parse_int_field(text, ti, 2, d.month)) return std::nullopt;
                    have_m = true;
                    break;
                case 'd':
                    if (!parse_int_field(text, ti, 2, d.day)) return std::nullopt;
                    have_d = true;
                    break;
                case '%':
                    if (ti >= text.size() || text[ti] != '%') return std::nullopt;
                    ++ti;
                    break;
                default:
                    return std::nullopt;
            }
        } else {
            if (ti >= text.size() || text[ti] != pc) return std::nullopt;
            ++ti;
        }
    }
    if (ti != text.size()) return std::nullopt;
    if (!have_y || !have_m || !have_d) return std::nullopt;
    if (!is_valid_date(d)) return std::nullopt;
    return d;
}

std::string format_date(const Date& d) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", d.year, d.month, d.day);
    return buf;
}

}  // namespace triadyn
