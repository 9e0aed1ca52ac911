#pragma once

namespace progress {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace progress
