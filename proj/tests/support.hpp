// satdist: learning distributions over satisfying assignments
// SPDX-License-Identifier: Apache-2.0
//
// Shared test utilities: random instances, finite-difference oracles, a
// chi-square tail, and the Pinsker hard assertion applied to every
// distribution pair the suite constructs.

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "satdist/boolfn.hpp"
#include "satdist/metrics.hpp"
#include "satdist/model.hpp"
#include "satdist/rng.hpp"

namespace testsup {

using namespace satdist;

/// Random full-support probability table (Dirichlet(1) via exponentials).
inline DistributionTable random_table(std::size_t n, Rng& rng) {
  std::vector<double> p(std::size_t{1} << n);
  double sum = 0.0;
  for (double& v : p) {
    v = -std::log(1.0 - rng.next_unit());
    sum += v;
  }
  for (double& v : p) v /= sum;
  return DistributionTable(n, std::move(p));
}

/// Random weight vector with ||w|| = scale * u, u uniform in (0,1].
inline WeightVector random_weights(std::size_t n, double scale, Rng& rng) {
  std::vector<double> w(n);
  double sq = 0.0;
  for (double& v : w) {
    v = rng.uniform(-1.0, 1.0);
    sq += v * v;
  }
  const double norm = std::sqrt(sq);
  const double target = scale * (1.0 - rng.next_unit());
  if (norm > 0)
    for (double& v : w) v *= target / norm;
  return WeightVector(std::move(w), std::max(1.0, scale));
}

inline Assignment random_point(std::size_t n, Rng& rng) {
  std::vector<std::int8_t> bits(n);
  for (auto& b : bits) b = static_cast<std::int8_t>(rng.sign());
  return Assignment(std::move(bits));
}

/// Central finite differences of a scalar function of w, step h.
inline std::vector<double> central_diff(const std::function<double(const std::vector<double>&)>& f,
                                        std::vector<double> w, double h = 1e-5) {
  std::vector<double> g(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double keep = w[i];
    w[i] = keep + h;
    const double up = f(w);
    w[i] = keep - h;
    const double down = f(w);
    w[i] = keep;
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

inline double l2_norm(const std::vector<double>& v) {
  double sq = 0.0;
  for (double x : v) sq += x * x;
  return std::sqrt(sq);
}

inline double relative_error(const std::vector<double>& got, const std::vector<double>& want) {
  std::vector<double> diff(got.size());
  for (std::size_t i = 0; i < got.size(); ++i) diff[i] = got[i] - want[i];
  return l2_norm(diff) / std::max(l2_norm(want), 1e-12);
}

// ---------------------------------------------------------------------------
// Regularized upper incomplete gamma Q(a, x), for chi-square p-values.
// Series expansion below a+1, Lentz continued fraction above.
// ---------------------------------------------------------------------------
inline double gamma_q(double a, double x) {
  if (a <= 0.0 || x < 0.0) throw std::invalid_argument("gamma_q domain");
  if (x == 0.0) return 1.0;
  const double log_prefactor = -x + a * std::log(x) - std::lgamma(a);
  if (x < a + 1.0) {
    double ap = a, del = 1.0 / a, sum = del;
    for (int i = 0; i < 1000; ++i) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::abs(del) < std::abs(sum) * 1e-15) break;
    }
    return 1.0 - sum * std::exp(log_prefactor);
  }
  const double tiny = 1e-300;
  double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
  for (int i = 1; i <= 1000; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-15) break;
  }
  return std::exp(log_prefactor) * h;
}

/// p-value of a chi-square statistic with the given degrees of freedom.
inline double chi_square_p(double stat, double dof) { return gamma_q(dof / 2.0, stat / 2.0); }

/// Goodness-of-fit p-value of observed counts against a uniform support.
inline double uniform_gof_p(const std::vector<std::uint64_t>& counts, std::uint64_t draws) {
  const double expected = static_cast<double>(draws) / static_cast<double>(counts.size());
  double stat = 0.0;
  for (std::uint64_t c : counts) {
    const double d = static_cast<double>(c) - expected;
    stat += d * d / expected;
  }
  if (counts.size() < 2) return 1.0;  // zero degrees of freedom
  return chi_square_p(stat, static_cast<double>(counts.size() - 1));
}

/// Hard Pinsker assertion: l1 <= sqrt(2 KL) for any pair the suite builds.
/// Returns (kl, l1) so callers can keep using the values.
inline std::pair<double, double> checked_pair(const DistributionTable& p,
                                              const DistributionTable& q) {
  const double kl = exact_kl(p, q);
  const double l1 = l1_distance(p, q);
  if (l1 > pinsker_bound(kl) + 1e-12)
    throw std::logic_error("Pinsker violated by a test-constructed pair");
  return {kl, l1};
}

}  // namespace testsup
