#pragma once

/**
 * @file rng.hpp
 * @brief Deterministic cross-platform PRNG (splitmix64) for seeded suites.
 *
 * std::mt19937 distributions are not bit-reproducible across standard
 * libraries; reports must be byte-deterministic, so sampling uses raw
 * splitmix64 output reduced by modulus.
 */

#include <cstdint>

namespace nrel {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform value in [0, n).
  std::uint64_t below(std::uint64_t n) { return next() % n; }

  /// Uniform value in [lo, hi] inclusive.
  long range(long lo, long hi) {
    return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

 private:
  std::uint64_t state_;
};

}  // namespace nrel
