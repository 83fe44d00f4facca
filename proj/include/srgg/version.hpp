#pragma once

namespace srgg {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace srgg
