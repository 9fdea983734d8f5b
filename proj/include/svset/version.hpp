#pragma once

namespace svset {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace svset
