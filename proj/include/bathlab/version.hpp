#pragma once

namespace bathlab {

inline constexpr const char* kVersion = "0.1.0";

} // namespace bathlab
