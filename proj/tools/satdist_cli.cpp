// satdist: learning distributions over satisfying assignments
// SPDX-License-Identifier: Apache-2.0
//
// Subcommands:
//   learn      run the full pipeline on a function file, emit a JSON report
//   enumerate  list all satisfying assignments (n <= 24)
//   eval       exact metrics between the distributions of two weight files
//   gen        emit a random (planted-satisfiable) CNF or a random LTF

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "satdist/boolfn.hpp"
#include "satdist/error.hpp"
#include "satdist/experiment.hpp"
#include "satdist/gen.hpp"
#include "satdist/metrics.hpp"
#include "satdist/model.hpp"
#include "satdist/rng.hpp"

namespace {

using namespace satdist;

std::ostream& open_sink(std::ofstream& file, const std::string& path) {
  if (path.empty()) return std::cout;
  file.open(path);
  if (!file) throw ConfigError("cannot write to " + path);
  return file;
}

BooleanFunction load_function(const std::string& path, const std::string& format) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open function file: " + path);
  return parse_function(in, parse_format(format));
}

int cmd_learn(const std::string& path, const std::string& format, double epsilon, double delta,
              std::uint64_t samples, std::uint64_t seed, const std::string& surrogate,
              const std::string& out_dir, std::optional<double> radius,
              std::optional<double> rho, std::optional<double> eps1, bool trace) {
  ExperimentConfig cfg;
  cfg.function_path = path;
  cfg.format = parse_format(format);
  cfg.epsilon = epsilon;
  cfg.delta = delta;
  cfg.samples = samples;
  cfg.seed = seed;
  cfg.surrogate = SurrogateSpec::parse(surrogate);
  if (radius) cfg.radius = *radius;
  cfg.lipschitz = rho;
  cfg.eps1 = eps1;
  cfg.out_dir = out_dir;
  cfg.trace = trace;

  const LearnReport report = run_experiment(cfg);
  if (out_dir.empty()) {
    std::cout << report.to_json().dump(2) << '\n';
    return 0;
  }
  const TrialOutcome& best = report.selected_outcome();
  std::cout << "n=" << report.dimension << " trials=" << report.trials
            << " T=" << report.iterations_per_trial << " total_steps=" << report.total_steps
            << '\n';
  std::cout << "selected trial " << report.selected
            << ": validation_risk=" << best.validation_risk;
  if (best.metrics)
    std::cout << " kl=" << best.metrics->kl << " l1=" << best.metrics->l1
              << " pinsker_bound=" << best.metrics->pinsker;
  std::cout << '\n';
  std::cout << "report: " << out_dir << "/report.json\n";
  return 0;
}

int cmd_enumerate(const std::string& path, const std::string& format, const std::string& out) {
  const BooleanFunction f = load_function(path, format);
  const SatisfyingSet set = enumerate_satisfying(f);
  std::ofstream file;
  std::ostream& os = open_sink(file, out);
  for (std::size_t i = 0; i < set.size(); ++i) os << set.assignment(i).to_string() << '\n';
  return 0;
}

int cmd_eval(const std::string& path_a, const std::string& path_b, const std::string& dump_a,
             const std::string& dump_b) {
  std::ifstream ina(path_a), inb(path_b);
  if (!ina) throw ConfigError("cannot open weight file: " + path_a);
  if (!inb) throw ConfigError("cannot open weight file: " + path_b);
  const WeightVector wa = read_weights(ina);
  const WeightVector wb = read_weights(inb);
  if (wa.size() != wb.size())
    throw ConfigError("weight files have different dimensions: " + std::to_string(wa.size()) +
                      " vs " + std::to_string(wb.size()));
  const DistributionTable pa = exact_distribution(wa);
  const DistributionTable pb = exact_distribution(wb);
  const double kl = exact_kl(pa, pb);
  nlohmann::json j{
      {"n", wa.size()},
      {"kl_ab", kl},
      {"kl_ab_bits", kl / std::log(2.0)},
      {"kl_ba", exact_kl(pb, pa)},
      {"l1", l1_distance(pa, pb)},
      {"pinsker_bound", pinsker_bound(kl)},
      {"entropy_a", entropy(pa)},
      {"entropy_b", entropy(pb)},
  };
  if (!dump_a.empty()) {
    std::ofstream os(dump_a);
    if (!os) throw ConfigError("cannot write to " + dump_a);
    write_distribution_csv(os, pa);
  }
  if (!dump_b.empty()) {
    std::ofstream os(dump_b);
    if (!os) throw ConfigError("cannot write to " + dump_b);
    write_distribution_csv(os, pb);
  }
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_gen(const std::string& kind, std::size_t n, std::uint64_t seed, std::size_t clauses,
            std::size_t clause_size, const std::string& out) {
  Rng rng(seed);
  std::ofstream file;
  std::ostream& os = open_sink(file, out);
  if (kind == "cnf") {
    if (clauses == 0) clauses = 2 * n;
    const BooleanFunction f = random_planted_cnf(n, clauses, clause_size, rng);
    os << "c planted satisfiable k-SAT instance, seed " << seed << '\n';
    os << serialize_function(f, FunctionFormat::dimacs);
    return 0;
  }
  if (kind == "ltf") {
    os << serialize_function(random_ltf(n, rng), FunctionFormat::ltf);
    return 0;
  }
  throw ConfigError("unknown instance kind: " + kind + " (expected cnf or ltf)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"satdist: learn a parametric distribution close to the uniform distribution "
               "over the satisfying assignments of a Boolean function"};
  app.require_subcommand(1);

  // learn
  auto* learn = app.add_subcommand("learn", "run the learning pipeline and emit a JSON report");
  std::string fn_path, fn_format = "dimacs", surrogate = "softplus", out_dir;
  double epsilon = 0.1, delta = 0.05;
  std::uint64_t samples = 1000, seed = 0;
  std::optional<double> radius, rho, eps1;
  bool trace = false;
  learn->add_option("--function", fn_path, "function file")->required();
  learn->add_option("--format", fn_format, "dimacs | tt-hex | ltf");
  learn->add_option("--epsilon", epsilon, "target accuracy (nats)");
  learn->add_option("--delta", delta, "failure probability in (0,1)");
  learn->add_option("--samples", samples, "satisfying-assignment budget k");
  learn->add_option("--seed", seed, "master seed");
  learn->add_option("--surrogate", surrogate, "softplus | phuber | logistic");
  learn->add_option("--out", out_dir, "output directory (report.json, wbar.txt)");
  learn->add_option("--B", radius, "weight ball radius (default 1)");
  learn->add_option("--rho", rho, "Lipschitz bound (default 2*sqrt(n))");
  learn->add_option("--eps1", eps1, "membership tolerance (default epsilon)");
  learn->add_flag("--trace", trace, "dump per-iteration trace CSVs");

  // enumerate
  auto* enumerate = app.add_subcommand("enumerate", "list all satisfying assignments");
  std::string en_path, en_format = "dimacs", en_out;
  enumerate->add_option("--function", en_path, "function file")->required();
  enumerate->add_option("--format", en_format, "dimacs | tt-hex | ltf");
  enumerate->add_option("--out", en_out, "output file (default stdout)");

  // eval
  auto* eval = app.add_subcommand("eval", "exact metrics between two weight files");
  std::string wa, wb, dump_a, dump_b;
  eval->add_option("--weights-a", wa, "first weight file (one real per line)")->required();
  eval->add_option("--weights-b", wb, "second weight file")->required();
  eval->add_option("--dump-dist-a", dump_a, "write P_a as index,bits,prob CSV");
  eval->add_option("--dump-dist-b", dump_b, "write P_b as index,bits,prob CSV");

  // gen
  auto* gen = app.add_subcommand("gen", "emit a random function instance");
  std::string g_kind = "cnf", g_out;
  std::size_t g_n = 8, g_clauses = 0, g_clause_size = 3;
  std::uint64_t g_seed = 0;
  gen->add_option("--kind", g_kind, "cnf | ltf");
  gen->add_option("--n", g_n, "number of variables");
  gen->add_option("--seed", g_seed, "generator seed");
  gen->add_option("--clauses", g_clauses, "clause count (default 2n)");
  gen->add_option("--clause-size", g_clause_size, "literals per clause (default 3)");
  gen->add_option("--out", g_out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
    if (learn->parsed())
      return cmd_learn(fn_path, fn_format, epsilon, delta, samples, seed, surrogate, out_dir,
                       radius, rho, eps1, trace);
    if (enumerate->parsed()) return cmd_enumerate(en_path, en_format, en_out);
    if (eval->parsed()) return cmd_eval(wa, wb, dump_a, dump_b);
    if (gen->parsed()) return cmd_gen(g_kind, g_n, g_seed, g_clauses, g_clause_size, g_out);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
  return 0;
}
