#pragma once

namespace compeval {

inline constexpr const char* kVersion = "0.1.0";

// Version of the on-disk report and comparison-log schemas. Bumped on any
// incompatible change; `compare` refuses reports with a different version.
inline constexpr int kSchemaVersion = 1;

}  // namespace compeval
