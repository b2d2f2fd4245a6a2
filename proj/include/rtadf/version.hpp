#pragma once

namespace rtadf {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace rtadf
