#pragma once

namespace ufo {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace ufo
