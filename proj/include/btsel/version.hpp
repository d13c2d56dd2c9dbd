#pragma once

namespace btsel {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace btsel
