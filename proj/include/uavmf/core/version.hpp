#pragma once

namespace uavmf {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace uavmf
