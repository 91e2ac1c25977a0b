#pragma once

namespace jointcs {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace jointcs
