#pragma once

namespace immcheck {

inline constexpr const char* kEngineVersion = "0.1.0";

} // namespace immcheck
