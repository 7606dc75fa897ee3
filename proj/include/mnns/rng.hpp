// Copyright 2026 The mnns Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>

namespace mnns {

/// SplitMix64 (Steele, Lea, Flood 2014). 64-bit state, increment
/// 0x9e3779b97f4a7c15, finalizer multipliers 0xbf58476d1ce4e5b9 and
/// 0x94d049bb133111eb. Chosen because it is trivial to reproduce in any
/// language, which keeps seeded suites portable.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform on [0, 1) from the top 53 bits.
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) noexcept { return next() % n; }

  /// Standard normal by Box-Muller (one draw per call, the pair's twin is dropped).
  double normal() noexcept {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  /// Independent stream for case i of a suite.
  static SplitMix64 for_case(std::uint64_t seed, std::uint64_t i) noexcept {
    SplitMix64 mix(seed ^ (0xd1b54a32d192ed03ULL * (i + 1)));
    return SplitMix64(mix.next());
  }

 private:
  std::uint64_t state_;
};

}  // namespace mnns
