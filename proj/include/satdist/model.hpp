// satdist: learning distributions over satisfying assignments
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <istream>
#include <numeric>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "satdist/boolfn.hpp"
#include "satdist/error.hpp"
#include "satdist/rng.hpp"
#include "satdist/sat_sampler.hpp"

namespace satdist {

/// log(2 cosh t), evaluated without overflow for large |t|.
inline double log_2cosh(double t) {
  const double a = std::abs(t);
  return a + std::log1p(std::exp(-2.0 * a));
}

/// Numerically stable log(1 + e^t).
inline double softplus(double t) { return t > 0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t)); }

/// Logistic sigmoid 1 / (1 + e^-t).
inline double sigmoid(double t) {
  return t >= 0 ? 1.0 / (1.0 + std::exp(-t)) : std::exp(t) / (1.0 + std::exp(t));
}

/**
 * Parameter vector w confined to the euclidean ball of radius B (default 1,
 * the unit sphere the optimization lives in).
 */
class WeightVector {
public:
  WeightVector() : radius_(1.0) {}

  explicit WeightVector(std::vector<double> w, double radius = 1.0)
      : w_(std::move(w)), radius_(radius) {
    if (radius_ <= 0) throw ConfigError("radius bound B must be positive");
    for (double v : w_)
      if (!std::isfinite(v)) throw NumericError("weight vector has non-finite entries");
    if (norm() > radius_ + 1e-9)
      throw ConfigError("weight vector violates its radius bound: ||w|| = " +
                        std::to_string(norm()) + " > B = " + std::to_string(radius_));
  }

  static WeightVector zero(std::size_t n, double radius = 1.0) {
    return WeightVector(std::vector<double>(n, 0.0), radius);
  }

  /// Build from an arbitrary vector, rescaling onto the ball if outside.
  static WeightVector projected(std::vector<double> w, double radius = 1.0) {
    double sq = 0.0;
    for (double v : w) sq += v * v;
    const double norm = std::sqrt(sq);
    if (norm > radius) {
      const double scale = radius / norm;
      for (double& v : w) v *= scale;
    }
    return WeightVector(std::move(w), radius);
  }

  std::size_t size() const { return w_.size(); }
  double radius() const { return radius_; }
  double operator[](std::size_t i) const { return w_[i]; }
  std::span<const double> values() const { return w_; }
  const std::vector<double>& vec() const { return w_; }

  double norm() const {
    double sq = 0.0;
    for (double v : w_) sq += v * v;
    return std::sqrt(sq);
  }

  double dot(const Assignment& x) const {
    if (x.size() != w_.size()) throw ConfigError("dimension mismatch between weights and assignment");
    double s = 0.0;
    for (std::size_t i = 0; i < w_.size(); ++i) s += x[i] > 0 ? w_[i] : -w_[i];
    return s;
  }

private:
  std::vector<double> w_;
  double radius_;
};

/**
 * Independent-bit exponential family on {-1,+1}^n:
 *
 *   P_w(x) = exp(<w,x>) / prod_i 2 cosh(w_i)
 *
 * so log P_w(x) = <w,x> - sum_i log(2 cosh w_i), in nats. The log-loss
 * -log P_w(x) is convex in w with exact gradient tanh(w) - x.
 */
inline double log_prob(const WeightVector& w, const Assignment& x) {
  double lp = w.dot(x);
  for (double v : w.values()) lp -= log_2cosh(v);
  return lp;
}

inline double loss(const WeightVector& w, const Assignment& x) { return -log_prob(w, x); }

/// Exact gradient of loss(w, .): tanh(w) - x componentwise.
inline std::vector<double> subgradient_logloss(const WeightVector& w, const Assignment& x) {
  if (x.size() != w.size()) throw ConfigError("dimension mismatch between weights and assignment");
  std::vector<double> g(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) g[i] = std::tanh(w[i]) - static_cast<double>(x[i]);
  return g;
}

// ---------------------------------------------------------------------------
// Surrogate losses g(<w,x>), each convex and 1-Lipschitz.
// ---------------------------------------------------------------------------

enum class SurrogateKind { softplus, pseudo_huber, logistic };

struct SurrogateSpec {
  SurrogateKind kind = SurrogateKind::softplus;

  static SurrogateSpec parse(std::string_view name) {
    if (name == "softplus") return {SurrogateKind::softplus};
    if (name == "phuber" || name == "pseudo-huber") return {SurrogateKind::pseudo_huber};
    if (name == "logistic") return {SurrogateKind::logistic};
    throw ConfigError("unsupported surrogate kind: " + std::string(name));
  }

  const char* name() const {
    switch (kind) {
      case SurrogateKind::softplus: return "softplus";
      case SurrogateKind::pseudo_huber: return "phuber";
      case SurrogateKind::logistic: return "logistic";
    }
    return "?";
  }

  /// Declared Lipschitz constant rho; 1 for every provided kind.
  double lipschitz() const { return 1.0; }

  double value(double t) const {
    switch (kind) {
      case SurrogateKind::softplus: return softplus(t);
      case SurrogateKind::pseudo_huber: return std::sqrt(t * t + 5.0);
      case SurrogateKind::logistic: return softplus(-t);
    }
    return 0.0;
  }

  double slope(double t) const {
    switch (kind) {
      case SurrogateKind::softplus: return sigmoid(t);
      case SurrogateKind::pseudo_huber: return t / std::sqrt(t * t + 5.0);
      case SurrogateKind::logistic: return -sigmoid(-t);
    }
    return 0.0;
  }
};

struct SurrogateEval {
  double value;
  std::vector<double> subgrad;
};

/// g(<w,x>) and its subgradient g'(<w,x>) * x.
inline SurrogateEval surrogate(const SurrogateSpec& g, const WeightVector& w, const Assignment& x) {
  const double t = w.dot(x);
  const double d = g.slope(t);
  std::vector<double> sub(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) sub[i] = d * static_cast<double>(x[i]);
  return {g.value(t), std::move(sub)};
}

// ---------------------------------------------------------------------------
// Exact probability tables (small n)
// ---------------------------------------------------------------------------

/**
 * Probability vector over all 2^n assignments, indexed like Assignment:
 * entry k is the mass of the assignment with index k.
 */
class DistributionTable {
public:
  DistributionTable(std::size_t n, std::vector<double> probs)
      : n_(n), probs_(std::move(probs)) {
    if (n_ > kEnumerationGuard) throw ConfigError("distribution table dimension exceeds 24");
    if (probs_.size() != (std::size_t{1} << n_))
      throw ConfigError("distribution table length must be exactly 2^n");
    // Kahan summation so the invariant check does not drown in its own
    // rounding at n = 24.
    double sum = 0.0, comp = 0.0;
    for (double p : probs_) {
      if (!(p >= 0.0)) throw NumericError("distribution table has a negative or NaN entry");
      const double y = p - comp;
      const double t = sum + y;
      comp = (t - sum) - y;
      sum = t;
    }
    if (std::abs(sum - 1.0) > 1e-12)
      throw NumericError("distribution table sums to " + std::to_string(sum) + ", not 1");
  }

  static DistributionTable uniform(std::size_t n) {
    const std::size_t size = std::size_t{1} << n;
    return DistributionTable(n, std::vector<double>(size, 1.0 / static_cast<double>(size)));
  }

  /// U_{f^-1(1)} from an enumerated support.
  static DistributionTable uniform_over(const SatisfyingSet& support) {
    if (support.empty())
      throw UnsatisfiableError("cannot build a uniform distribution over an empty support");
    std::vector<double> probs(std::size_t{1} << support.dimension(), 0.0);
    const double p = 1.0 / static_cast<double>(support.size());
    for (std::size_t i = 0; i < support.size(); ++i) probs[support.index_at(i)] = p;
    return DistributionTable(support.dimension(), std::move(probs));
  }

  std::size_t dimension() const { return n_; }
  std::size_t size() const { return probs_.size(); }
  double operator[](std::uint64_t idx) const { return probs_[idx]; }
  const std::vector<double>& probs() const { return probs_; }

private:
  std::size_t n_;
  std::vector<double> probs_;
};

/// Materialize P_w over the whole cube (n <= 24).
inline DistributionTable exact_distribution(const WeightVector& w) {
  const std::size_t n = w.size();
  if (n > kEnumerationGuard)
    throw ConfigError("dimension too large for an exact distribution (n > 24)");
  // per-bit factors e^{+w_i}/2cosh(w_i), e^{-w_i}/2cosh(w_i)
  std::vector<double> plus(n), minus(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double z = log_2cosh(w[i]);
    plus[i] = std::exp(w[i] - z);
    minus[i] = std::exp(-w[i] - z);
  }
  std::vector<double> probs(std::size_t{1} << n);
  for (std::uint64_t idx = 0; idx < probs.size(); ++idx) {
    double p = 1.0;
    for (std::size_t i = 0; i < n; ++i) p *= (idx >> (n - 1 - i)) & 1u ? plus[i] : minus[i];
    probs[idx] = p;
  }
  return DistributionTable(n, std::move(probs));
}

/// Inverse-CDF sampler for an arbitrary table.
class DistributionSampler {
public:
  explicit DistributionSampler(const DistributionTable& table)
      : n_(table.dimension()), cdf_(table.size()) {
    double acc = 0.0;
    for (std::size_t i = 0; i < table.size(); ++i) {
      acc += table[i];
      cdf_[i] = acc;
    }
    cdf_.back() = 1.0;
  }

  Assignment draw(Rng& rng) const {
    const double u = rng.next_unit();
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    const std::uint64_t idx = static_cast<std::uint64_t>(it - cdf_.begin());
    return Assignment::from_index(idx < cdf_.size() ? idx : cdf_.size() - 1, n_);
  }

private:
  std::size_t n_;
  std::vector<double> cdf_;
};

// ---------------------------------------------------------------------------
// Text formats: weights one-per-line, tables as index,bits,prob CSV.
// ---------------------------------------------------------------------------

inline void write_weights(std::ostream& os, const WeightVector& w) {
  for (double v : w.values()) os << detail::format_double(v) << '\n';
}

inline WeightVector read_weights(std::istream& in, double radius = 0.0) {
  std::vector<double> w;
  std::string token;
  while (in >> token) {
    // strtod semantics so "inf"/overflow parse and then fail the finiteness
    // check as a numeric error rather than a malformed file
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end == token.c_str() || *end != '\0')
      throw ConfigError("malformed weight file: bad token '" + token + "'");
    w.push_back(v);
  }
  if (w.empty()) throw ConfigError("weight file is empty");
  if (radius <= 0.0) {
    double sq = 0.0;
    for (double x : w) sq += x * x;
    radius = std::max(1.0, std::sqrt(sq));
  }
  return WeightVector(std::move(w), radius);
}

inline void write_distribution_csv(std::ostream& os, const DistributionTable& table) {
  os << "index,bits,prob\n";
  for (std::uint64_t idx = 0; idx < table.size(); ++idx)
    os << idx << ',' << Assignment::from_index(idx, table.dimension()).to_string() << ','
       << detail::format_double(table[idx]) << '\n';
}

}  // namespace satdist
