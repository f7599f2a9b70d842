// satdist: learning distributions over satisfying assignments
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "satdist/boolfn.hpp"
#include "satdist/error.hpp"
#include "satdist/rng.hpp"

namespace satdist {

enum class SamplerMode {
  automatic,  // enumerate when n <= 24, otherwise rejection
  enumerate,
  reject,
};

/**
 * Uniform sampler over f^-1(1).
 *
 * Enumeration-backed draws are exactly uniform (a uniform index into the
 * materialized support). Rejection draws a uniform cube point and retries
 * until it satisfies f, which is uniform on the support by symmetry; the
 * attempt cap of 2^24 per draw bounds latency at the configured density
 * floor of 2^-20, below which enumeration is required.
 */
class SatisfyingSampler {
public:
  static constexpr std::uint64_t kDefaultMaxAttempts = std::uint64_t{1} << 24;

  explicit SatisfyingSampler(const BooleanFunction& f, SamplerMode mode = SamplerMode::automatic,
                             std::uint64_t max_attempts = kDefaultMaxAttempts)
      : f_(f), support_(0, {}), max_attempts_(max_attempts) {
    if (mode == SamplerMode::automatic)
      mode = f.dimension() <= kEnumerationGuard ? SamplerMode::enumerate : SamplerMode::reject;
    mode_ = mode;
    if (mode_ == SamplerMode::enumerate) {
      support_ = enumerate_satisfying(f);
      if (support_.empty()) throw UnsatisfiableError("function has no satisfying assignment");
    }
  }

  bool enumeration_backed() const { return mode_ == SamplerMode::enumerate; }

  /// Support size when enumeration-backed, 0 otherwise.
  std::size_t support_size() const { return support_.size(); }

  const SatisfyingSet& support() const { return support_; }

  Assignment draw(Rng& rng) const {
    if (mode_ == SamplerMode::enumerate)
      return support_.assignment(rng.below(support_.size()));
    const std::size_t n = f_.dimension();
    std::vector<std::int8_t> bits(n);
    for (std::uint64_t attempt = 0; attempt < max_attempts_; ++attempt) {
      for (std::size_t i = 0; i < n; ++i) bits[i] = static_cast<std::int8_t>(rng.sign());
      Assignment x(bits);
      if (f_.satisfied_by(x)) return x;
    }
    throw NumericError("max rejections exceeded after " + std::to_string(max_attempts_) +
                       " attempts; satisfying density below floor, enumeration required");
  }

private:
  const BooleanFunction& f_;
  SamplerMode mode_;
  SatisfyingSet support_;
  std::uint64_t max_attempts_;
};

}  // namespace satdist
