// satdist: learning distributions over satisfying assignments
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "satdist/boolfn.hpp"
#include "satdist/error.hpp"
#include "satdist/model.hpp"
#include "satdist/rng.hpp"

namespace satdist {

namespace detail {

/// Round-to-nearest when within 1e-9 of an integer, else ceil; keeps the
/// budget formulas exact when B^2 rho^2 / eps^2 lands on an integer up to
/// floating-point noise.
inline std::uint64_t ceil_guarded(double x) {
  const double r = std::nearbyint(x);
  if (std::abs(x - r) <= 1e-9 * std::max(1.0, std::abs(x)))
    return static_cast<std::uint64_t>(r);
  return static_cast<std::uint64_t>(std::ceil(x));
}

}  // namespace detail

/// Iterations required for excess risk eps on a convex rho-Lipschitz problem
/// over the B-ball: ceil(B^2 rho^2 / eps^2).
inline std::uint64_t iteration_budget(double radius, double lipschitz, double epsilon) {
  if (!(radius > 0) || !(lipschitz > 0) || !(epsilon > 0))
    throw ConfigError("iteration_budget needs positive B, rho, epsilon");
  const double q = (radius * radius * lipschitz * lipschitz) / (epsilon * epsilon);
  const std::uint64_t t = detail::ceil_guarded(q);
  return t < 1 ? 1 : t;
}

/// Constant step eta = B / (rho sqrt(T)).
inline double step_size(double radius, double lipschitz, std::uint64_t iterations) {
  if (!(radius > 0) || !(lipschitz > 0) || iterations < 1)
    throw ConfigError("step_size needs positive B, rho and T >= 1");
  return radius / (lipschitz * std::sqrt(static_cast<double>(iterations)));
}

struct SgdConfig {
  std::size_t dimension = 0;
  double radius = 1.0;       // B
  double lipschitz = 1.0;    // rho
  double epsilon = 0.1;      // target excess risk, nats
  std::uint64_t iterations = 1;  // T
  double step = 1.0;             // eta
  std::uint64_t seed = 0;
  bool record_trace = false;

  /// Algorithm-1 signature: eta and T given directly.
  static SgdConfig explicit_schedule(std::size_t dimension, double eta, std::uint64_t T,
                                     double radius = 1.0, std::uint64_t seed = 0) {
    if (!(eta > 0) || T < 1 || !(radius > 0)) throw ConfigError("need eta > 0, T >= 1, B > 0");
    SgdConfig cfg;
    cfg.dimension = dimension;
    cfg.radius = radius;
    cfg.step = eta;
    cfg.iterations = T;
    cfg.seed = seed;
    return cfg;
  }

  /// Algorithm-2 signature: derive (eta, T) from (B, rho, epsilon).
  static SgdConfig from_accuracy(std::size_t dimension, double radius, double lipschitz,
                                 double epsilon, std::uint64_t seed = 0) {
    SgdConfig cfg;
    cfg.dimension = dimension;
    cfg.radius = radius;
    cfg.lipschitz = lipschitz;
    cfg.epsilon = epsilon;
    cfg.iterations = iteration_budget(radius, lipschitz, epsilon);
    cfg.step = step_size(radius, lipschitz, cfg.iterations);
    cfg.seed = seed;
    return cfg;
  }
};

/// One oracle answer: the loss at (w, x) and an element of its subdifferential.
struct OracleEval {
  double value = 0.0;
  std::vector<double> subgrad;
};

struct SgdTrace {
  WeightVector wbar;                  // (1/T) sum of w^(1..T)
  std::uint64_t steps = 0;            // update count, equals T
  std::vector<double> iterate_norms;  // ||w^(t)||, t = 1..T (only when traced)
  std::vector<double> loss_estimates; // l(w^(t), x_t) (only when traced)
};

/**
 * Projected averaged stochastic subgradient descent.
 *
 * Starts at w^(1) = 0; each step samples x, takes a subgradient step, then
 * rescales back onto the B-ball if the update left it. The output is the
 * uniform average of w^(1)..w^(T) (the initial zero included, the final
 * post-loop iterate not), accumulated as a streaming sum divided once.
 * Deterministic given the seed.
 *
 * Oracle: (std::span<const double> w, const Assignment& x) -> OracleEval.
 * Sampler: (Rng&) -> Assignment, i.i.d. draws.
 */
template <class Oracle, class Sampler>
SgdTrace run_sgd(Oracle&& oracle, Sampler&& sample, const SgdConfig& cfg) {
  const std::size_t n = cfg.dimension;
  if (n == 0) throw ConfigError("SGD dimension must be positive");
  if (cfg.iterations < 1 || !(cfg.step > 0) || !(cfg.radius > 0))
    throw ConfigError("SGD needs T >= 1, eta > 0, B > 0");

  Rng rng(cfg.seed);
  std::vector<double> w(n, 0.0), sum(n, 0.0);
  SgdTrace trace{WeightVector::zero(n, cfg.radius)};
  if (cfg.record_trace) {
    trace.iterate_norms.reserve(cfg.iterations);
    trace.loss_estimates.reserve(cfg.iterations);
  }

  for (std::uint64_t t = 0; t < cfg.iterations; ++t) {
    for (std::size_t i = 0; i < n; ++i) sum[i] += w[i];
    if (cfg.record_trace) {
      double sq = 0.0;
      for (double v : w) sq += v * v;
      trace.iterate_norms.push_back(std::sqrt(sq));
    }

    const Assignment x = sample(rng);
    if (x.size() != n) throw ConfigError("sampler dimension does not match SGD dimension");
    OracleEval eval = oracle(std::span<const double>(w), x);
    if (eval.subgrad.size() != n) throw NumericError("oracle subgradient has wrong dimension");
    if (!std::isfinite(eval.value)) throw NumericError("oracle returned a non-finite loss");
    for (double g : eval.subgrad)
      if (!std::isfinite(g)) throw NumericError("oracle returned a non-finite subgradient");
    if (cfg.record_trace) trace.loss_estimates.push_back(eval.value);

    double sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      w[i] -= cfg.step * eval.subgrad[i];
      sq += w[i] * w[i];
    }
    if (sq > cfg.radius * cfg.radius) {
      const double scale = cfg.radius / std::sqrt(sq);
      for (double& v : w) v *= scale;
    }
    ++trace.steps;
  }

  std::vector<double> wbar(n);
  for (std::size_t i = 0; i < n; ++i) wbar[i] = sum[i] / static_cast<double>(cfg.iterations);
  trace.wbar = WeightVector(std::move(wbar), cfg.radius);
  return trace;
}

/// The log-loss oracle for learning P_w: value -log P_w(x), gradient tanh(w) - x.
struct LogLossOracle {
  OracleEval operator()(std::span<const double> w, const Assignment& x) const {
    OracleEval eval;
    eval.subgrad.resize(w.size());
    double dot = 0.0, logz = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double xi = static_cast<double>(x[i]);
      dot += w[i] * xi;
      logz += log_2cosh(w[i]);
      eval.subgrad[i] = std::tanh(w[i]) - xi;
    }
    eval.value = logz - dot;
    return eval;
  }
};

/// Surrogate oracle: value g(<w,x>), subgradient g'(<w,x>) x.
struct SurrogateOracle {
  SurrogateSpec spec;

  OracleEval operator()(std::span<const double> w, const Assignment& x) const {
    double t = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) t += w[i] * static_cast<double>(x[i]);
    OracleEval eval;
    eval.value = spec.value(t);
    const double d = spec.slope(t);
    eval.subgrad.resize(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) eval.subgrad[i] = d * static_cast<double>(x[i]);
    return eval;
  }
};

/// Dump a recorded trace as CSV: t, risk_estimate, iterate_norm.
inline void write_trace_csv(std::ostream& os, const SgdTrace& trace) {
  os << "t,risk_estimate,iterate_norm\n";
  for (std::size_t t = 0; t < trace.iterate_norms.size(); ++t) {
    os << (t + 1) << ',';
    if (t < trace.loss_estimates.size()) os << detail::format_double(trace.loss_estimates[t]);
    os << ',' << detail::format_double(trace.iterate_norms[t]) << '\n';
  }
}

}  // namespace satdist
