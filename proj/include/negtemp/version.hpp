#pragma once

namespace negtemp {

inline constexpr const char* kVersion = "0.1.0";

} // namespace negtemp
