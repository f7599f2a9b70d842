// satdist: learning distributions over satisfying assignments
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>

namespace satdist {

/// splitmix64 finalizer; used only to spread seeds.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/**
 * Seedable generator with portable draw functions.
 *
 * The engine is std::mt19937_64, whose output sequence is fixed by the
 * standard, and all derived draws (uniform integers, unit doubles, signs)
 * are produced here rather than through std::*_distribution, so identical
 * seeds give identical streams on every implementation.
 *
 * Stream splitting: stream k of a master seed s is seeded with
 * mix64(s ^ (k+1) * 0x9e3779b97f4a7c15). Trial i of an experiment uses
 * stream i+1; stream 0 draws the sample set.
 */
class Rng {
public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  static std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t stream_index) {
    return mix64(master_seed ^ (stream_index + 1) * 0x9e3779b97f4a7c15ULL);
  }

  static Rng stream(std::uint64_t master_seed, std::uint64_t stream_index) {
    return Rng(stream_seed(master_seed, stream_index));
  }

  std::uint64_t next_u64() { return gen_(); }

  /// Unbiased uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

  /// Fair coin, as a sign in {-1, +1}.
  int sign() { return (next_u64() & 1u) ? +1 : -1; }

private:
  std::mt19937_64 gen_;
};

}  // namespace satdist
