#pragma once

namespace psq {

inline constexpr int version_major = 0;
inline constexpr int version_minor = 1;
inline constexpr int version_patch = 0;
inline constexpr const char* version_string = "0.1.0";

// Version of the JSON/CSV report layout; bump on any field/order change.
inline constexpr int schema_version = 1;

}  // namespace psq
