#pragma once

namespace frontier {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace frontier
