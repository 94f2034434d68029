#pragma once

namespace cflab {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace cflab
