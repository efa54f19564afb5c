#pragma once

#include <cstdint>

namespace faasim {

// All simulation time is integer microseconds since run start. Integer time
// keeps event ordering identical across platforms.
using SimTime = std::int64_t;

constexpr SimTime kUsPerMs = 1'000;
constexpr SimTime kUsPerSec = 1'000'000;

constexpr SimTime ms(std::int64_t v) { return v * kUsPerMs; }
constexpr SimTime seconds(std::int64_t v) { return v * kUsPerSec; }

inline double to_seconds(SimTime t) { return static_cast<double>(t) / kUsPerSec; }

// ceil(num / den) for non-negative integers.
inline std::int64_t ceil_div(std::int64_t num, std::int64_t den) {
  return (num + den - 1) / den;
}

}  // namespace faasim
