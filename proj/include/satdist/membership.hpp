// satdist: learning distributions over satisfying assignments
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "satdist/boolfn.hpp"
#include "satdist/error.hpp"
#include "satdist/model.hpp"

namespace satdist {

/// Membership can only evaluate the cube exhaustively up to this dimension.
inline constexpr std::size_t kMembershipGuard = 20;

/**
 * The retrieval rule: a candidate x is declared a satisfying assignment when
 * its surrogate value a = g(<wbar, x>) sits within eps1 of the learned risk
 * level b = E[g(<wbar, x>)]. The boundary |a - b| = eps1 accepts. No accuracy
 * guarantee is claimed; evaluate_classifier measures what the rule does.
 */
struct MembershipRule {
  SurrogateSpec g;
  WeightVector wbar;
  double b = 0.0;     // learned risk level, nats
  double eps1 = 0.1;  // acceptance tolerance

  // eps1 = 0 is allowed: the boundary |a - b| = eps1 accepts, so a zero
  // tolerance still accepts exact hits.
  MembershipRule(SurrogateSpec g_, WeightVector wbar_, double b_, double eps1_)
      : g(g_), wbar(std::move(wbar_)), b(b_), eps1(eps1_) {
    if (!(eps1 >= 0)) throw ConfigError("membership tolerance eps1 must be non-negative");
    if (!std::isfinite(b)) throw NumericError("membership level b must be finite");
  }
};

/// Exact b = E_{x~table}[g(<wbar, x>)].
inline double estimate_b(const SurrogateSpec& g, const WeightVector& wbar,
                         const DistributionTable& table) {
  if (table.dimension() != wbar.size())
    throw ConfigError("dimension mismatch between weights and distribution");
  double b = 0.0;
  for (std::uint64_t idx = 0; idx < table.size(); ++idx) {
    if (table[idx] == 0.0) continue;
    b += table[idx] * g.value(wbar.dot(Assignment::from_index(idx, table.dimension())));
  }
  return b;
}

/// Sample-mean b over a drawn set of assignments.
inline double estimate_b(const SurrogateSpec& g, const WeightVector& wbar,
                         std::span<const Assignment> sample) {
  if (sample.empty()) throw ConfigError("estimate_b needs a nonempty sample");
  double sum = 0.0;
  for (const Assignment& x : sample) sum += g.value(wbar.dot(x));
  return sum / static_cast<double>(sample.size());
}

inline bool classify(const MembershipRule& rule, const Assignment& x) {
  const double a = rule.g.value(rule.wbar.dot(x));
  return std::abs(a - rule.b) <= rule.eps1;
}

struct ConfusionRecord {
  std::uint64_t tp = 0, fp = 0, tn = 0, fn = 0;

  std::uint64_t total() const { return tp + fp + tn + fn; }

  /// Undefined (nullopt) when the denominator is zero.
  std::optional<double> precision() const {
    const std::uint64_t d = tp + fp;
    if (d == 0) return std::nullopt;
    return static_cast<double>(tp) / static_cast<double>(d);
  }

  std::optional<double> recall() const {
    const std::uint64_t d = tp + fn;
    if (d == 0) return std::nullopt;
    return static_cast<double>(tp) / static_cast<double>(d);
  }
};

/// Exhaustive comparison of the rule against f over the whole cube (n <= 20).
inline ConfusionRecord evaluate_classifier(const MembershipRule& rule, const BooleanFunction& f) {
  const std::size_t n = f.dimension();
  if (n != rule.wbar.size()) throw ConfigError("rule and function dimensions differ");
  if (n > kMembershipGuard)
    throw ConfigError("dimension too large for exhaustive classifier evaluation (n > 20)");
  ConfusionRecord rec;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    const Assignment x = Assignment::from_index(idx, n);
    const bool truth = f.satisfied_by(x);
    const bool accepted = classify(rule, x);
    if (truth)
      accepted ? ++rec.tp : ++rec.fn;
    else
      accepted ? ++rec.fp : ++rec.tn;
  }
  return rec;
}

}  // namespace satdist
