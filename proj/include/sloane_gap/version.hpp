#pragma once

namespace sloane_gap {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace sloane_gap
