#pragma once

namespace cometq {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace cometq
