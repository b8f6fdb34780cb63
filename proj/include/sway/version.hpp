#pragma once

namespace sway {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace sway
