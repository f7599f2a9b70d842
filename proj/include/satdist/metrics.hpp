// satdist: learning distributions over satisfying assignments
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "satdist/error.hpp"
#include "satdist/model.hpp"

namespace satdist {

/**
 * KL(P || Q) = sum_{x : P(x) > 0} P(x) ln(P(x) / Q(x)), in nats.
 *
 * A point with P(x) > 0 but Q(x) = 0 is reported as an error rather than
 * +inf: the parametric family here is strictly positive, so a support
 * violation means a bug upstream, not a legitimate divergence.
 */
inline double exact_kl(const DistributionTable& p, const DistributionTable& q) {
  if (p.dimension() != q.dimension())
    throw ConfigError("KL needs distributions over the same cube");
  double kl = 0.0;
  for (std::uint64_t idx = 0; idx < p.size(); ++idx) {
    if (p[idx] == 0.0) continue;
    if (q[idx] == 0.0)
      throw NumericError("KL support violation at assignment index " + std::to_string(idx) +
                         ": P > 0 but Q = 0");
    kl += p[idx] * std::log(p[idx] / q[idx]);
  }
  return kl;
}

/// l1(P, Q) = sum_x |P(x) - Q(x)|, twice the total variation distance.
inline double l1_distance(const DistributionTable& p, const DistributionTable& q) {
  if (p.dimension() != q.dimension())
    throw ConfigError("l1 distance needs distributions over the same cube");
  double d = 0.0;
  for (std::uint64_t idx = 0; idx < p.size(); ++idx) d += std::abs(p[idx] - q[idx]);
  return d;
}

/// Shannon entropy in nats, with 0 ln(1/0) = 0.
inline double entropy(const DistributionTable& p) {
  double h = 0.0;
  for (std::uint64_t idx = 0; idx < p.size(); ++idx)
    if (p[idx] > 0.0) h -= p[idx] * std::log(p[idx]);
  return h;
}

/// Pinsker, in l1 form: l1(P,Q) <= sqrt(2 KL(P,Q)).
inline double pinsker_bound(double kl) {
  if (kl < 0) throw ConfigError("pinsker_bound needs a non-negative KL value");
  return std::sqrt(2.0 * kl);
}

/**
 * The log-loss risk split: E_{x~P}[loss(w,x)] = KL(P, P_w) + H(P).
 * All three fields are computed independently; the identity holds to
 * 1e-9 and is what ties risk minimization to distribution learning.
 */
struct RiskDecomposition {
  double risk;     // E_{x~P}[-log P_w(x)], nats
  double kl;       // KL(P, P_w)
  double entropy;  // H(P)

  double residual() const { return risk - (kl + entropy); }
};

inline RiskDecomposition risk_decomposition(const DistributionTable& p, const WeightVector& w) {
  if (p.dimension() != w.size())
    throw ConfigError("dimension mismatch between distribution and weights");
  double risk = 0.0;
  for (std::uint64_t idx = 0; idx < p.size(); ++idx) {
    if (p[idx] == 0.0) continue;
    risk += p[idx] * loss(w, Assignment::from_index(idx, p.dimension()));
  }
  const DistributionTable pw = exact_distribution(w);
  return {risk, exact_kl(p, pw), entropy(p)};
}

/// (1/|S|) sum_i loss(w, x_i).
inline double empirical_risk(const WeightVector& w, std::span<const Assignment> sample) {
  if (sample.empty()) throw ConfigError("empirical risk needs a nonempty sample");
  double sum = 0.0;
  for (const Assignment& x : sample) sum += loss(w, x);
  return sum / static_cast<double>(sample.size());
}

/**
 * min_{||w|| <= B} KL(P, P_w), exact for this product family.
 *
 * With m_i = E_P[x_i], KL(P, P_w) = -H(P) + sum_i (log 2cosh(w_i) - m_i w_i)
 * plus terms free of w, and the minimizer solves tanh(w_i) = m_i coordinate-
 * wise; when that point leaves the ball, the KKT system
 * tanh(w_i) + 2 lambda w_i = m_i with ||w(lambda)|| = B is solved by nested
 * bisection. Used to report excess KL for targets the family cannot realize.
 */
inline double best_in_ball_kl(const DistributionTable& p, double radius) {
  if (!(radius > 0)) throw ConfigError("radius bound B must be positive");
  const std::size_t n = p.dimension();
  std::vector<double> mean(n, 0.0);
  for (std::uint64_t idx = 0; idx < p.size(); ++idx) {
    if (p[idx] == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i)
      mean[i] += (idx >> (n - 1 - i)) & 1u ? p[idx] : -p[idx];
  }

  // coordinate solve of tanh(w) + 2 lambda w = m
  const auto solve_coord = [](double m, double lambda) {
    if (m == 0.0) return 0.0;
    double lo = 0.0, hi = 1.0;
    const double target = std::abs(m);
    const auto phi = [&](double w) { return std::tanh(w) + 2.0 * lambda * w; };
    while (phi(hi) < target) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (phi(mid) < target ? lo : hi) = mid;
    }
    const double w = 0.5 * (lo + hi);
    return m > 0 ? w : -w;
  };

  const auto solution_norm = [&](double lambda) {
    double sq = 0.0;
    for (double m : mean) {
      const double w = solve_coord(std::clamp(m, -1.0 + 1e-15, 1.0 - 1e-15), lambda);
      sq += w * w;
    }
    return std::sqrt(sq);
  };

  double lambda = 0.0;
  if (solution_norm(0.0) > radius) {
    double lo = 0.0, hi = 1.0;
    while (solution_norm(hi) > radius) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (solution_norm(mid) > radius ? lo : hi) = mid;
    }
    lambda = hi;
  }

  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i)
    w[i] = solve_coord(std::clamp(mean[i], -1.0 + 1e-15, 1.0 - 1e-15), lambda);
  return exact_kl(p, exact_distribution(WeightVector::projected(std::move(w), radius)));
}

}  // namespace satdist
