#pragma once

namespace volterra {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace volterra
