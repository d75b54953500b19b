#pragma once

// Counter-based random draws: every value is a pure function of
// (seed, counter, stream), so any subset of indices can be evaluated in any
// order on any worker and reproduce the same numbers.

#include <cmath>
#include <cstdint>
#include <numbers>

namespace eraser::random {

/// SplitMix64 finalizer (Steele, Lea & Flood).
[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

[[nodiscard]] constexpr std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t counter,
                                                   std::uint64_t stream) noexcept {
  const std::uint64_t key = mix64(seed ^ mix64(stream * 0xD1B54A32D192ED03ULL));
  return mix64(key ^ mix64(counter + 0x632BE59BD9B4E019ULL * (stream + 1)));
}

/// Uniform on [0, 1) with 53 random bits.
[[nodiscard]] constexpr double uniform01(std::uint64_t seed, std::uint64_t counter,
                                         std::uint64_t stream) noexcept {
  return static_cast<double>(counter_hash(seed, counter, stream) >> 11) * 0x1.0p-53;
}

/// Standard normal via Box-Muller on two dedicated streams.
[[nodiscard]] inline double standard_normal(std::uint64_t seed, std::uint64_t counter,
                                            std::uint64_t stream_a, std::uint64_t stream_b) noexcept {
  const double u1 = 1.0 - uniform01(seed, counter, stream_a);  // (0, 1]
  const double u2 = uniform01(seed, counter, stream_b);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

/// Derives an independent seed for a sub-run (e.g. one scan point).
[[nodiscard]] constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) noexcept {
  return counter_hash(seed, salt, 0xA5A5A5A5ULL);
}

}  // namespace eraser::random
