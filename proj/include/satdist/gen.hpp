// satdist: learning distributions over satisfying assignments
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "satdist/boolfn.hpp"
#include "satdist/error.hpp"
#include "satdist/rng.hpp"

namespace satdist {

/**
 * Random k-SAT instance with a planted satisfying assignment: every clause
 * is forced to contain at least one literal true under a hidden point, so
 * the result is never unsatisfiable.
 */
inline BooleanFunction random_planted_cnf(std::size_t n, std::size_t clauses,
                                          std::size_t clause_size, Rng& rng) {
  if (n < 1) throw ConfigError("planted CNF needs n >= 1");
  if (clause_size < 1 || clause_size > n) throw ConfigError("clause size must lie in [1, n]");
  std::vector<int> hidden(n);
  for (std::size_t i = 0; i < n; ++i) hidden[i] = rng.sign();
  std::vector<std::size_t> vars(n);
  for (std::size_t i = 0; i < n; ++i) vars[i] = i;
  Cnf cnf;
  cnf.n = n;
  cnf.clauses.reserve(clauses);
  for (std::size_t c = 0; c < clauses; ++c) {
    for (std::size_t j = 0; j < clause_size; ++j)
      std::swap(vars[j], vars[j + rng.below(n - j)]);
    std::vector<int> lits(clause_size);
    bool satisfied = false;
    for (std::size_t j = 0; j < clause_size; ++j) {
      const int sign = rng.sign();
      lits[j] = sign * static_cast<int>(vars[j] + 1);
      satisfied = satisfied || sign == hidden[vars[j]];
    }
    if (!satisfied) {
      const std::size_t j = rng.below(clause_size);
      lits[j] = hidden[vars[j]] * static_cast<int>(vars[j] + 1);
    }
    cnf.clauses.push_back(std::move(lits));
  }
  return BooleanFunction::from_cnf(std::move(cnf));
}

/// Random LTF: weights uniform in [-1,1], threshold uniform in [-1,1].
inline BooleanFunction random_ltf(std::size_t n, Rng& rng) {
  if (n < 1) throw ConfigError("random LTF needs n >= 1");
  std::vector<double> weights(n);
  for (double& w : weights) w = rng.uniform(-1.0, 1.0);
  return BooleanFunction::from_ltf({std::move(weights), rng.uniform(-1.0, 1.0)});
}

}  // namespace satdist
