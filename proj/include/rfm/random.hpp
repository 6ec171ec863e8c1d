#pragma once

#include <cstdint>

namespace rfm {

// Counter-based hashing: every draw is a pure function of (key, counter), so
// results do not depend on platform RNG implementations or draw order.

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t hash_combine(std::uint64_t key, std::uint64_t counter) {
  return splitmix64(splitmix64(key) ^ splitmix64(counter + 0x632BE59BD9B4E019ULL));
}

/// Uniform double in [0, 1).
constexpr double unit_double(std::uint64_t h) {
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, s) via multiply-high.
inline std::uint64_t bounded(std::uint64_t h, std::uint64_t s) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(h) * s) >> 64);
}

}  // namespace rfm
