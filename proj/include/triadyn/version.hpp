#pragma once

namespace triadyn {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace triadyn
