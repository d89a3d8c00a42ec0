#pragma once

#include <stdexcept>
#include <string>

namespace triadyn {

// Bad user input, file, or configuration. The CLI maps this to exit code 2.
struct InputError : std::runtime_error {
    explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

// A computation that could not produce a valid result (non-convergence,
// degenerate data). The CLI maps this to exit code 1.
struct AnalysisError : std::runtime_error {
    explicit AnalysisError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace triadyn
