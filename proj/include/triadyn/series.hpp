#pragma once

#include <optional>
#include <string>
#include <vector>

namespace triadyn {

// Labeled scalar sequence. Missing values are explicit, never silently zero.
struct ScalarSeries {
    std::vector<std::string> labels;
    std::vector<std::optional<double>> values;

    std::size_t size() const { return labels.size(); }
};

}  // namespace triadyn
