#pragma once

namespace fhl {

inline constexpr int kDefaultLevelCap = 30;
// Cube coordinates are 64-bit and point-process samples carry 64 bits.
inline constexpr int kHardLevelCap = 62;

/// Current cap on dyadic levels. Starts at 30 unless FHL_LEVEL_CAP is set
/// in the environment; the environment value wins over set_level_cap().
int level_cap();
void set_level_cap(int cap);

/// Throws LevelCapExceeded when level > level_cap().
void check_level(int level);

}  // namespace fhl
