#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace triadyn {

// Locale-independent float formatting, 12 significant digits. Used for every
// number written to CSV/JSON so reruns are byte-identical.
std::string fmt_double(double v);

// Splits one delimited line. Double-quoted fields may contain the delimiter;
// "" inside a quoted field is an escaped quote. Trailing \r is stripped.
std::vector<std::string> split_delimited(std::string_view line, char delimiter);

// Picks ',' or '\t' by which appears in the header line (tab wins if present).
char detect_delimiter(std::string_view header_line);

}  // namespace triadyn
