// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <cmath>

#include "doctest.h"
#include "gen.hpp"
#include "oracles.hpp"
#include "submod.hpp"

namespace pma {
namespace {

using nlohmann::json;

Instance dr_instance(uint64_t seed) {
  GenParams p;
  p.n = 1 + static_cast<int>(seed % 3);
  p.l = seed % 2 ? 3 : 2;
  p.m = 2 + static_cast<int>((seed / 2) % 2);
  p.family = "budget_additive";
  if (seed % 3 == 0) {
    p.family = "coverage_max";
    p.q = 2;
    p.l = 2;
  }
  p.fosd = false;
  p.seed = seed;
  return gen_random(p);
}

TEST_CASE("extended reward on small sets") {
  const Instance inst = testing::t1();
  const auto pp = build_partition_problem(inst);
  CHECK(extended_reward(pp, {}) == doctest::Approx(0.0));
  CHECK(extended_f(pp, {{0, 1}}) == doctest::Approx(f_value(pp, std::vector<int>{1})));
  // Summed draws of the T2 actions: null is 0, a1 is 0 or 1 with prob 1/2.
  const Instance t2 = testing::t2();
  const auto pp2 = build_partition_problem(t2);
  CHECK(extended_reward(pp2, {{0, 0}, {0, 1}}) == doctest::Approx(0.5));
}

TEST_CASE("extended reward of both actions in a two-outcome chain") {
  json j = testing::t1_json();
  j["agents"][0]["costs"] = {0.0, 0.1, 0.2};
  j["agents"][0]["dists"] = {{1.0, 0.0}, {0.6, 0.4}, {0.3, 0.7}};
  j["reward"] = {{"family", "exp_sum"}, {"params", {{"kappa", 1.0}, {"cap", 2.0}}}};
  const Instance inst = testing::make_instance(j);
  const auto pp = build_partition_problem(inst);
  const auto g = [](double s) { return std::expm1(s) / std::expm1(2.0); };
  const double p0 = 0.6 * 0.3, p1 = 0.6 * 0.7 + 0.4 * 0.3, p2 = 0.4 * 0.7;
  const double want = p0 * g(0) + p1 * g(1) + p2 * g(2);
  ElementSet S;
  for (const auto& e : pp.parts[0])
    if (e.action != 0) S.push_back({0, e.action});
  REQUIRE(S.size() == 2);
  CHECK(extended_reward(pp, S) == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("multilinear estimates") {
  const Instance inst = dr_instance(4);
  const auto pp = build_partition_problem(inst);
  const auto ep = make_extended(pp);
  const int g = ep.size();
  REQUIRE(g > 0);
  std::vector<double> zero(g, 0.0);
  CHECK(multilinear_estimate(ep, zero, 10, 0).value == doctest::Approx(ep.reward(0)));
  std::vector<double> ones(g, 1.0);
  CHECK(multilinear_estimate(ep, ones, 10, 0).value == doctest::Approx(ep.reward((uint64_t{1} << g) - 1)));
  ExtendedProblem one = ep;
  one.ground.resize(1);
  one.lin.resize(1);
  one.table = {ep.reward(0), ep.reward(1)};
  const auto half = multilinear_estimate(one, {0.5}, 10, 0);
  CHECK(half.value == doctest::Approx(0.5 * ep.reward(1) + 0.5 * ep.reward(0)));
  CHECK(half.marginals[0] == doctest::Approx(0.5 * (ep.reward(1) - ep.reward(0))));
}

TEST_CASE("sampled multilinear estimate agrees with the exact one") {
  const Instance inst = dr_instance(5);
  const auto pp = build_partition_problem(inst);
  auto ep = make_extended(pp);
  const int g = ep.size();
  Rng rng(1);
  std::vector<double> x(g);
  for (double& v : x) v = rng.uniform();
  const auto exact = multilinear_estimate(ep, x, 1, 0);
  ep.table.clear();
  const auto a = multilinear_estimate(ep, x, 20000, 7);
  const auto b = multilinear_estimate(ep, x, 20000, 7);
  CHECK(a.value == b.value);
  CHECK(std::fabs(a.value - exact.value) < 0.02);
}

TEST_CASE("single agent guarantee") {
  const Instance inst = testing::t1();
  const auto pp = build_partition_problem(inst);
  DrOptions opt;
  opt.eps = 0.05;
  opt.verify_reward = false;
  const auto sol = solve_dr(pp, opt);
  CHECK(sol.sol.value >= (1.0 - 1.0 / std::exp(1.0)) * 1.0 - 0.5 - 0.05);
}

TEST_CASE("expensive elements are pruned") {
  // Beating the cheap spread action costs 1.78 in expectation.
  json j = testing::t1_json();
  j["outcomes"] = {{0.0}, {0.5}, {1.0}};
  j["agents"][0]["costs"] = {0.0, 0.01, 0.9};
  j["agents"][0]["dists"] = {{1.0, 0.0, 0.0}, {0.0, 0.5, 0.5}, {0.0, 0.0, 1.0}};
  j["reward"] = {{"family", "budget_additive"}, {"params", {{"w", {1.0}}, {"B", 1.0}}}};
  const Instance inst = testing::make_instance(j);
  const auto pp = build_partition_problem(inst);
  REQUIRE(pp.element(0, 2) != nullptr);
  CHECK(pp.element(0, 2)->weight == doctest::Approx(1.78));
  const auto ep = make_extended(pp);
  CHECK(ep.ground == ElementSet{{0, 1}});
  CHECK(make_extended(pp, false).size() == 2);
  CHECK(solve_dr(pp, {}).sol.profile != std::vector<int>{2});
}

TEST_CASE("reported value equals the contract utility") {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const Instance inst = dr_instance(seed);
    const auto pp = build_partition_problem(inst);
    DrOptions opt;
    opt.eps = 0.05;
    opt.seed = seed;
    const auto sol = solve_dr(pp, opt);
    CHECK(principal_utility(inst, sol.sol.contract) == doctest::Approx(sol.sol.value).epsilon(1e-6));
    std::vector<double> part(pp.n(), 0.0);
    for (size_t e = 0; e < sol.ground.size(); ++e) {
      CHECK(sol.fractional[e] >= -1e-12);
      part[sol.ground[e].first] += sol.fractional[e];
    }
    for (double s : part) CHECK(s <= 1.0 + 1e-9);
  }
}

TEST_CASE("extended reward is monotone and submodular") {
  for (uint64_t seed = 0; seed < 30; ++seed) {
    const Instance inst = dr_instance(seed);
    const auto pp = build_partition_problem(inst);
    const auto ep = make_extended(pp, false);
    const int g = ep.size();
    if (g == 0) continue;
    Rng rng(seed);
    for (int t = 0; t < 1000; ++t) {
      uint64_t big = 0;
      for (int e = 0; e < g; ++e)
        if (rng.uniform() < 0.5) big |= uint64_t{1} << e;
      uint64_t small = big;
      for (int e = 0; e < g; ++e)
        if (rng.uniform() < 0.5) small &= ~(uint64_t{1} << e);
      CHECK(ep.reward(small) <= ep.reward(big) + 1e-9);
      const int x = rng.below_int(g);
      const uint64_t bit = uint64_t{1} << x;
      if (big & bit) continue;
      CHECK(ep.reward(small | bit) - ep.reward(small) >= ep.reward(big | bit) - ep.reward(big) - 1e-9);
    }
  }
}

TEST_CASE("per-part rounding does not lose multilinear value") {
  for (uint64_t seed = 0; seed < 10; ++seed) {
    const Instance inst = dr_instance(seed);
    const auto pp = build_partition_problem(inst);
    const auto ep = make_extended(pp);
    const int g = ep.size();
    if (g == 0) continue;
    Rng rng(seed + 50);
    std::vector<double> x(g);
    std::vector<double> part(pp.n(), 0.0);
    for (int e = 0; e < g; ++e) {
      x[e] = rng.uniform();
      part[ep.ground[e].first] += x[e];
    }
    for (int e = 0; e < g; ++e) x[e] /= std::max(1.0, part[ep.ground[e].first]);
    const double F = multilinear_estimate(ep, x, 1, 0).value;
    Rng draw_rng(sub_seed(seed, 1));
    double mean = 0.0, sq = 0.0;
    const int draws = 10000;
    for (int d = 0; d < draws; ++d) {
      uint64_t mask = 0;
      for (int i = 0; i < pp.n(); ++i) {
        double u = draw_rng.uniform();
        for (int e = 0; e < g; ++e) {
          if (ep.ground[e].first != i) continue;
          if (u < x[e]) {
            mask |= uint64_t{1} << e;
            break;
          }
          u -= x[e];
        }
      }
      const double v = ep.reward(mask);
      mean += v;
      sq += v * v;
    }
    mean /= draws;
    const double se = std::sqrt(std::max(0.0, sq / draws - mean * mean) / draws);
    CHECK(mean >= F - 3.0 * se - 1e-12);
  }
}

}  // namespace
}  // namespace pma
