#pragma once

namespace paramp {

inline constexpr int version_major = 0;
inline constexpr int version_minor = 1;
inline constexpr int version_patch = 0;
inline constexpr const char* version_string = "0.1.0";
inline constexpr int output_schema_version = 1;

}  // namespace paramp
