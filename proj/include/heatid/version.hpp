#pragma once

namespace heatid {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace heatid
