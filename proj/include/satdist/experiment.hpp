// satdist: learning distributions over satisfying assignments
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <future>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "satdist/boolfn.hpp"
#include "satdist/error.hpp"
#include "satdist/membership.hpp"
#include "satdist/metrics.hpp"
#include "satdist/model.hpp"
#include "satdist/rng.hpp"
#include "satdist/sat_sampler.hpp"
#include "satdist/sgd.hpp"

namespace satdist {

/// Independent SGD repetitions for failure probability delta:
/// max(1, ceil(ln(1/delta))).
inline std::uint64_t num_trials(double delta) {
  if (!(delta > 0.0) || !(delta < 1.0)) throw ConfigError("delta must lie in (0, 1)");
  const std::uint64_t r = detail::ceil_guarded(std::log(1.0 / delta));
  return r < 1 ? 1 : r;
}

struct ExperimentConfig {
  std::string function_path;  // echoed into the report; may be empty for in-memory runs
  FunctionFormat format = FunctionFormat::dimacs;
  double epsilon = 0.1;  // target accuracy, nats
  double delta = 0.05;   // failure probability
  double radius = 1.0;   // B
  std::optional<double> lipschitz;  // rho; defaults to the log-loss bound 2 sqrt(n)
  SurrogateSpec surrogate{};
  std::uint64_t samples = 1000;  // k
  std::uint64_t seed = 0;        // master seed
  std::optional<double> eps1;    // membership tolerance; defaults to epsilon
  std::string out_dir;           // empty: nothing written
  bool trace = false;            // dump per-iteration CSVs

  void validate() const {
    if (!(epsilon > 0)) throw ConfigError("epsilon must be positive");
    if (!(delta > 0) || !(delta < 1)) throw ConfigError("delta must lie in (0, 1)");
    if (!(radius > 0)) throw ConfigError("B must be positive");
    if (lipschitz && !(*lipschitz > 0)) throw ConfigError("rho must be positive");
    if (eps1 && !(*eps1 > 0)) throw ConfigError("eps1 must be positive");
    if (samples < 5)
      throw ConfigError("sample budget " + std::to_string(samples) +
                        " is too small to split 80/20 (need at least 5)");
  }
};

/// Exact distances of P_wbar from the target, available when n <= 20.
struct TrialMetrics {
  double kl = 0.0;             // KL(P, P_wbar), nats
  double l1 = 0.0;             // l1(P, P_wbar)
  double pinsker = 0.0;        // sqrt(2 KL)
  double entropy_target = 0.0; // H(P), nats
  double best_kl = 0.0;        // min over the B-ball of KL(P, P_w)
  double excess_kl = 0.0;      // kl - best_kl
};

struct TrialOutcome {
  std::size_t trial = 0;
  std::uint64_t stream_seed = 0;
  WeightVector wbar;
  std::uint64_t steps = 0;
  double train_risk = 0.0;
  double validation_risk = 0.0;
  double b = 0.0;  // learned risk level for the membership rule
  std::optional<TrialMetrics> metrics;
  std::optional<ConfusionRecord> confusion;
  SgdTrace trace;  // per-iteration columns kept only when tracing
};

struct LearnReport {
  ExperimentConfig config;
  std::string function_kind;
  std::size_t dimension = 0;
  std::optional<std::uint64_t> satisfying_count;
  std::uint64_t trials = 0;
  std::uint64_t iterations_per_trial = 0;
  double step = 0.0;
  double lipschitz_effective = 0.0;
  double eps1_effective = 0.0;
  std::uint64_t total_steps = 0;
  std::uint64_t train_count = 0;
  std::uint64_t validation_count = 0;
  std::vector<TrialOutcome> outcomes;
  std::size_t selected = 0;

  struct Timing {
    double parse_s = 0, sample_s = 0, train_s = 0, metrics_s = 0, total_s = 0;
  } timing;

  const TrialOutcome& selected_outcome() const { return outcomes[selected]; }

  nlohmann::json to_json(bool include_timing = true) const;
};

namespace detail {

inline nlohmann::json confusion_json(const ConfusionRecord& rec) {
  nlohmann::json j{{"tp", rec.tp}, {"fp", rec.fp}, {"tn", rec.tn}, {"fn", rec.fn}};
  const auto prec = rec.precision();
  const auto rec_ = rec.recall();
  j["precision"] = prec ? nlohmann::json(*prec) : nlohmann::json(nullptr);
  j["recall"] = rec_ ? nlohmann::json(*rec_) : nlohmann::json(nullptr);
  return j;
}

inline double seconds_between(std::chrono::steady_clock::time_point a,
                              std::chrono::steady_clock::time_point b) {
  return std::chrono::duration<double>(b - a).count();
}

}  // namespace detail

inline nlohmann::json LearnReport::to_json(bool include_timing) const {
  nlohmann::json j;
  j["schema"] = "satdist-report/1";
  j["config"] = {
      {"function", config.function_path},
      {"format", format_name(config.format)},
      {"epsilon", config.epsilon},
      {"delta", config.delta},
      {"B", config.radius},
      {"rho", lipschitz_effective},
      {"rho_overridden", config.lipschitz.has_value()},
      {"surrogate", config.surrogate.name()},
      {"samples", config.samples},
      {"seed", config.seed},
      {"eps1", eps1_effective},
      {"trace", config.trace},
  };
  j["function"] = {{"kind", function_kind}, {"n", dimension}};
  j["function"]["satisfying_count"] =
      satisfying_count ? nlohmann::json(*satisfying_count) : nlohmann::json(nullptr);
  j["budget"] = {
      {"trials", trials},
      {"iterations_per_trial", iterations_per_trial},
      {"step_size", step},
      {"total_steps", total_steps},
      {"train_samples", train_count},
      {"validation_samples", validation_count},
  };
  j["trials"] = nlohmann::json::array();
  for (const TrialOutcome& t : outcomes) {
    nlohmann::json tj{
        {"trial", t.trial},
        {"stream_seed", t.stream_seed},
        {"wbar", t.wbar.vec()},
        {"wbar_norm", t.wbar.norm()},
        {"steps", t.steps},
        {"train_risk", t.train_risk},
        {"validation_risk", t.validation_risk},
        {"b", t.b},
    };
    if (t.metrics) {
      tj["metrics"] = {
          {"kl", t.metrics->kl},
          {"kl_bits", t.metrics->kl / std::log(2.0)},
          {"l1", t.metrics->l1},
          {"pinsker_bound", t.metrics->pinsker},
          {"entropy_target", t.metrics->entropy_target},
          {"entropy_target_bits", t.metrics->entropy_target / std::log(2.0)},
          {"best_in_ball_kl", t.metrics->best_kl},
          {"excess_kl", t.metrics->excess_kl},
      };
    } else {
      tj["metrics"] = nullptr;
    }
    tj["confusion"] = t.confusion ? detail::confusion_json(*t.confusion) : nlohmann::json(nullptr);
    j["trials"].push_back(std::move(tj));
  }
  j["selected_trial"] = selected;
  if (include_timing) {
    j["timing"] = {
        {"parse_s", timing.parse_s},   {"sample_s", timing.sample_s},
        {"train_s", timing.train_s},   {"metrics_s", timing.metrics_s},
        {"total_s", timing.total_s},
    };
  }
  return j;
}

/**
 * Algorithm A end to end: draw k satisfying assignments, split 80/20, run
 * num_trials(delta) independent SGD repetitions of iteration_budget(B,rho,eps)
 * steps each on the training split, keep the repetition with the lowest
 * held-out empirical risk, then measure it exactly when the dimension allows.
 * Deterministic given the master seed; trials run on independent streams.
 */
inline LearnReport run_experiment(const ExperimentConfig& cfg, const BooleanFunction& f,
                                  double parse_seconds = 0.0) {
  using clock = std::chrono::steady_clock;
  cfg.validate();
  const auto t_start = clock::now();

  LearnReport report;
  report.config = cfg;
  report.function_kind = f.kind();
  report.dimension = f.dimension();
  const std::size_t n = f.dimension();

  // --- sample phase ---------------------------------------------------
  const auto t_sample = clock::now();
  SatisfyingSampler sampler(f);  // throws UnsatisfiableError when enumeration finds nothing
  if (sampler.enumeration_backed()) report.satisfying_count = sampler.support_size();

  std::vector<Assignment> drawn;
  drawn.reserve(cfg.samples);
  {
    Rng sample_rng = Rng::stream(cfg.seed, 0);
    for (std::uint64_t i = 0; i < cfg.samples; ++i) drawn.push_back(sampler.draw(sample_rng));
  }
  const std::uint64_t val_count = (cfg.samples + 4) / 5;  // ceil(k/5), deterministic by order
  const std::uint64_t train_count = cfg.samples - val_count;
  const std::span<const Assignment> train(drawn.data(), train_count);
  const std::span<const Assignment> validation(drawn.data() + train_count, val_count);
  report.train_count = train_count;
  report.validation_count = val_count;

  // --- budget ----------------------------------------------------------
  const double rho = cfg.lipschitz.value_or(2.0 * std::sqrt(static_cast<double>(n)));
  const std::uint64_t T = iteration_budget(cfg.radius, rho, cfg.epsilon);
  const double eta = step_size(cfg.radius, rho, T);
  const std::uint64_t R = num_trials(cfg.delta);
  const double eps1 = cfg.eps1.value_or(cfg.epsilon);
  report.lipschitz_effective = rho;
  report.eps1_effective = eps1;
  report.trials = R;
  report.iterations_per_trial = T;
  report.step = eta;

  // --- shared exact structures (small n) --------------------------------
  std::optional<DistributionTable> target;   // U_{f^-1(1)}
  double target_entropy = 0.0, best_kl = 0.0;
  if (n <= kMembershipGuard) {
    target = DistributionTable::uniform_over(sampler.support());
    target_entropy = entropy(*target);
    best_kl = best_in_ball_kl(*target, cfg.radius);
  }

  // --- training phase ----------------------------------------------------
  const auto t_train = clock::now();
  const auto run_trial = [&](std::size_t trial) {
    TrialOutcome out;
    out.trial = trial;
    out.stream_seed = Rng::stream_seed(cfg.seed, trial + 1);  // stream 0 drew the samples
    SgdConfig sgd_cfg;
    sgd_cfg.dimension = n;
    sgd_cfg.radius = cfg.radius;
    sgd_cfg.lipschitz = rho;
    sgd_cfg.epsilon = cfg.epsilon;
    sgd_cfg.iterations = T;
    sgd_cfg.step = eta;
    sgd_cfg.seed = out.stream_seed;
    sgd_cfg.record_trace = cfg.trace;
    SgdTrace trace = run_sgd(
        LogLossOracle{},
        [&](Rng& rng) { return train[rng.below(train_count)]; }, sgd_cfg);
    out.steps = trace.steps;
    out.wbar = trace.wbar;
    out.train_risk = empirical_risk(out.wbar, train);
    out.validation_risk = empirical_risk(out.wbar, validation);
    out.trace = std::move(trace);
    return out;
  };

  report.outcomes.reserve(R);
  if (R > 1) {
    std::vector<std::future<TrialOutcome>> futures;
    futures.reserve(R);
    for (std::size_t i = 0; i < R; ++i)
      futures.push_back(std::async(std::launch::async, run_trial, i));
    for (auto& fut : futures) report.outcomes.push_back(fut.get());
  } else {
    report.outcomes.push_back(run_trial(0));
  }

  report.total_steps = 0;
  for (const TrialOutcome& t : report.outcomes) report.total_steps += t.steps;
  if (report.total_steps != R * T)
    throw NumericError("step counter mismatch: expected trials * T");

  report.selected = 0;
  for (std::size_t i = 1; i < R; ++i)
    if (report.outcomes[i].validation_risk < report.outcomes[report.selected].validation_risk)
      report.selected = i;

  // --- metrics phase ------------------------------------------------------
  const auto t_metrics = clock::now();
  for (TrialOutcome& out : report.outcomes) {
    if (target) {
      const DistributionTable learned = exact_distribution(out.wbar);
      TrialMetrics m;
      m.kl = exact_kl(*target, learned);
      m.l1 = l1_distance(*target, learned);
      m.pinsker = pinsker_bound(m.kl);
      m.entropy_target = target_entropy;
      m.best_kl = best_kl;
      m.excess_kl = m.kl - best_kl;
      if (m.l1 > m.pinsker + 1e-12)
        throw NumericError("Pinsker violated in report: l1 = " + std::to_string(m.l1) +
                           " > bound " + std::to_string(m.pinsker));
      out.metrics = m;
      out.b = estimate_b(cfg.surrogate, out.wbar, *target);
      out.confusion = evaluate_classifier(MembershipRule(cfg.surrogate, out.wbar, out.b, eps1), f);
    } else {
      out.b = estimate_b(cfg.surrogate, out.wbar, train);
    }
    if (!cfg.trace) {
      out.trace.iterate_norms.clear();
      out.trace.loss_estimates.clear();
    }
  }

  // --- timings ----------------------------------------------------------
  const auto t_end = clock::now();
  report.timing.parse_s = parse_seconds;
  report.timing.sample_s = detail::seconds_between(t_sample, t_train);
  report.timing.train_s = detail::seconds_between(t_train, t_metrics);
  report.timing.metrics_s = detail::seconds_between(t_metrics, t_end);
  report.timing.total_s = parse_seconds + detail::seconds_between(t_start, t_end);

  // --- optional report files ---------------------------------------------
  if (!cfg.out_dir.empty()) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    {
      std::ofstream os(fs::path(cfg.out_dir) / "report.json");
      if (!os) throw ConfigError("cannot write report under " + cfg.out_dir);
      os << report.to_json().dump(2) << '\n';
    }
    {
      std::ofstream os(fs::path(cfg.out_dir) / "wbar.txt");
      write_weights(os, report.selected_outcome().wbar);
    }
    if (cfg.trace) {
      for (const TrialOutcome& t : report.outcomes) {
        std::ofstream os(fs::path(cfg.out_dir) / ("trace_trial" + std::to_string(t.trial) + ".csv"));
        write_trace_csv(os, t.trace);
      }
    }
  }
  return report;
}

/// File-based entry point used by the CLI: parse, then run.
inline LearnReport run_experiment(const ExperimentConfig& cfg) {
  using clock = std::chrono::steady_clock;
  cfg.validate();
  const auto t0 = clock::now();
  std::ifstream in(cfg.function_path);
  if (!in) throw ConfigError("cannot open function file: " + cfg.function_path);
  const BooleanFunction f = parse_function(in, cfg.format);
  const double parse_s = detail::seconds_between(t0, clock::now());
  return run_experiment(cfg, f, parse_s);
}

}  // namespace satdist
