#pragma once

namespace croann {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace croann
