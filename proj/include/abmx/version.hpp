#pragma once

namespace abmx {

inline constexpr const char* kVersion = "0.1.0";

} // namespace abmx
