#pragma once

namespace rperm {
inline constexpr const char* kVersion = "1.0.0";
}  // namespace rperm
