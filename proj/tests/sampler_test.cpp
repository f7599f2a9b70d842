// satdist: learning distributions over satisfying assignments
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch.hpp>

#include <map>

#include "satdist/gen.hpp"
#include "satdist/sat_sampler.hpp"
#include "support.hpp"

using namespace satdist;
using namespace testsup;

TEST_CASE("constant-true n=1 draws both points near-evenly", "[sampler]") {
  const auto f = BooleanFunction::from_cnf({1, {}});
  SatisfyingSampler sampler(f);
  Rng rng(5);
  int plus = 0;
  const int draws = 10000;
  for (int i = 0; i < draws; ++i)
    if (sampler.draw(rng)[0] > 0) ++plus;
  CHECK(std::abs(plus / double(draws) - 0.5) < 0.02);
}

TEST_CASE("OR(x1,x2) frequencies are 1/3 within 0.02 and pass chi-square", "[sampler]") {
  const auto f = BooleanFunction::from_cnf({2, {{1, 2}}});
  const auto support = enumerate_satisfying(f);
  REQUIRE(support.size() == 3);

  const auto run = [&](SamplerMode mode) {
    SatisfyingSampler sampler(f, mode);
    Rng rng(99);
    std::map<std::uint64_t, std::uint64_t> counts;
    const std::uint64_t draws = 30000;
    for (std::uint64_t i = 0; i < draws; ++i) {
      const Assignment x = sampler.draw(rng);
      REQUIRE(f.satisfied_by(x));
      ++counts[x.index()];
    }
    std::vector<std::uint64_t> ordered;
    for (std::size_t i = 0; i < support.size(); ++i) {
      const double freq = counts[support.index_at(i)] / double(draws);
      CHECK(std::abs(freq - 1.0 / 3.0) < 0.02);
      ordered.push_back(counts[support.index_at(i)]);
    }
    CHECK(uniform_gof_p(ordered, draws) >= 0.01);
  };

  SECTION("enumeration-backed") { run(SamplerMode::enumerate); }
  SECTION("rejection-backed") { run(SamplerMode::reject); }
}

TEST_CASE("AND of all literals yields the unique all-plus point on every draw", "[sampler]") {
  Cnf cnf{6, {}};
  for (int v = 1; v <= 6; ++v) cnf.clauses.push_back({v});
  const auto f = BooleanFunction::from_cnf(std::move(cnf));
  SatisfyingSampler sampler(f);
  Rng rng(1);
  const Assignment all_plus = Assignment::from_index((1u << 6) - 1, 6);
  for (int i = 0; i < 200; ++i) REQUIRE(sampler.draw(rng) == all_plus);
}

TEST_CASE("sampler error paths", "[sampler]") {
  const auto unsat = BooleanFunction::from_cnf({2, {{}}});
  SECTION("enumeration mode rejects an unsatisfiable function up front") {
    CHECK_THROWS_AS(SatisfyingSampler(unsat), UnsatisfiableError);
  }
  SECTION("rejection mode gives up after the attempt cap") {
    SatisfyingSampler sampler(unsat, SamplerMode::reject, 1000);
    Rng rng(3);
    CHECK_THROWS_AS(sampler.draw(rng), NumericError);
  }
}

TEST_CASE("draws are deterministic given the seed", "[sampler]") {
  Rng gen(8);
  const auto f = random_planted_cnf(8, 16, 3, gen);
  SatisfyingSampler sampler(f);
  for (SamplerMode mode : {SamplerMode::enumerate, SamplerMode::reject}) {
    SatisfyingSampler s(f, mode);
    Rng a(42), b(42);
    for (int i = 0; i < 50; ++i) REQUIRE(s.draw(a) == s.draw(b));
  }
}

TEST_CASE("goodness of fit against the enumerated uniform law, n up to 10", "[sampler]") {
  Rng gen(2024);
  for (int rep = 0; rep < 3; ++rep) {
    const std::size_t n = 6 + rep * 2;  // 6, 8, 10
    const auto f = random_planted_cnf(n, 2 * n, 3, gen);
    SatisfyingSampler sampler(f);
    const auto& support = sampler.support();
    std::map<std::uint64_t, std::uint64_t> counts;
    Rng rng(500 + rep);
    const std::uint64_t draws = 30000;
    for (std::uint64_t i = 0; i < draws; ++i) ++counts[sampler.draw(rng).index()];
    std::vector<std::uint64_t> ordered;
    for (std::size_t i = 0; i < support.size(); ++i) ordered.push_back(counts[support.index_at(i)]);
    CHECK(uniform_gof_p(ordered, draws) >= 0.01);
  }
}
