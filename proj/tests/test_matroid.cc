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


#include "doctest.h"
#include "error.hpp"
#include "gen.hpp"
#include "matroid.hpp"
#include "oracles.hpp"

namespace pma {
namespace {

using nlohmann::json;

TEST_CASE("partition problem on a single agent") {
  const Instance inst = testing::t1();
  const auto pp = build_partition_problem(inst);
  REQUIRE(pp.n() == 1);
  REQUIRE(pp.parts[0].size() == 2);
  CHECK(pp.parts[0][0].action == 0);
  CHECK(pp.parts[0][0].weight == 0.0);
  CHECK(pp.parts[0][1].weight == doctest::Approx(0.5));
  CHECK(base_count(pp) == 2.0);
  const auto best = brute_force_optimal(pp);
  CHECK(best.profile == std::vector<int>{1});
  CHECK(best.value == doctest::Approx(0.5));
  CHECK(best.contract.recommendations == std::vector<int>{1});
  CHECK(best.contract.payments[0][0] == doctest::Approx(0.0));
  CHECK(best.contract.payments[0][1] == doctest::Approx(0.5));
}

TEST_CASE("empty set gives the zero contract") {
  const Instance inst = testing::t1();
  const auto pp = build_partition_problem(inst);
  const Contract c = contract_from_set(pp, {});
  CHECK(c.recommendations == std::vector<int>{0});
  CHECK(c.payments[0] == std::vector<double>{0.0, 0.0});
  CHECK(f_value(pp, std::vector<std::pair<int, int>>{}) == doctest::Approx(0.0));
}

TEST_CASE("expensive actions leave the all-null base") {
  json j = testing::t1_json();
  j["agents"][0]["costs"] = {0.0, 0.8};
  j["reward"]["params"]["w"] = {0.5};
  const Instance inst = testing::make_instance(j);
  const auto best = brute_force_optimal(build_partition_problem(inst));
  CHECK(best.profile == std::vector<int>{0});
  CHECK(best.value == doctest::Approx(0.0));
}

TEST_CASE("two independent copies are additive") {
  json a = {{"costs", {0.0, 0.25}}, {"dists", {{1.0, 0.0}, {0.0, 1.0}}}, {"null_action", 0}};
  const Instance inst = testing::make_instance({{"q", 1},
                                                {"outcomes", {{0.0}, {1.0}}},
                                                {"agents", {a, a}},
                                                {"reward", {{"family", "linear"}, {"params", {{"w", {0.5}}}}}}});
  const auto best = brute_force_optimal(build_partition_problem(inst));
  CHECK(best.profile == std::vector<int>{1, 1});
  CHECK(best.value == doctest::Approx(0.5));
}

TEST_CASE("nine bases on two agents with three inducible actions") {
  json a = {{"costs", {0.0, 0.1, 0.2}},
            {"dists", {{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}},
            {"null_action", 0}};
  const Instance inst = testing::make_instance({{"q", 1},
                                                {"outcomes", {{0.0}, {0.5}, {1.0}}},
                                                {"agents", {a, a}},
                                                {"reward", {{"family", "linear"}, {"params", {{"w", {1.0}}}}}}});
  CHECK(base_count(build_partition_problem(inst)) == 9.0);
}

TEST_CASE("non-inducible actions are dropped without changing the optimum") {
  json j = testing::t2_json();
  j["agents"][0]["costs"] = {0.0, 0.2, 0.1};
  j["agents"][0]["dists"] = {{1.0, 0.0}, {0.5, 0.5}, {1.0, 0.0}};
  const Instance with = testing::make_instance(j);
  const auto pp = build_partition_problem(with);
  CHECK(pp.position(0, 2) == -1);
  CHECK(pp.element(0, 2) == nullptr);
  const Instance without = testing::t2();
  CHECK(brute_force_optimal(pp).value == doctest::Approx(brute_force_optimal(build_partition_problem(without)).value));
}

TEST_CASE("brute force matches an independent reference") {
  for (uint64_t seed = 0; seed < 60; ++seed) {
    GenParams p;
    p.n = 1 + static_cast<int>(seed % 3);
    p.l = 2 + static_cast<int>(seed % 2);
    p.m = 2 + static_cast<int>((seed / 2) % 2);
    p.family = seed % 4 == 0 ? "linear" : "exp_sum";
    p.seed = seed;
    const Instance inst = gen_random(p);
    const auto pp = build_partition_problem(inst);
    const auto best = brute_force_optimal(pp);
    CHECK(best.value == doctest::Approx(testing::ref_optimum(inst)).epsilon(1e-7));
    CHECK(principal_utility(inst, best.contract) == doctest::Approx(best.value).epsilon(1e-7));
  }
}

TEST_CASE("f equals the utility of the reconstructed contract on every independent set") {
  for (uint64_t seed = 0; seed < 30; ++seed) {
    GenParams p;
    p.n = 2;
    p.l = 3;
    p.m = 2 + static_cast<int>(seed % 2);
    p.seed = 100 + seed;
    const Instance inst = gen_random(p);
    const auto pp = build_partition_problem(inst);
    double best_any = -1e300;
    // Each part contributes nothing or one of its elements.
    std::vector<size_t> pick(pp.n(), 0);
    while (true) {
      std::vector<std::pair<int, int>> S;
      for (int i = 0; i < pp.n(); ++i)
        if (pick[i] > 0) S.push_back({i, pp.parts[i][pick[i] - 1].action});
      const double f = f_value(pp, S);
      CHECK(principal_utility(inst, contract_from_set(pp, S)) == doctest::Approx(f).epsilon(1e-7));
      CHECK(f_value(pp, profile_of(pp, S)) == doctest::Approx(f).epsilon(1e-12));
      best_any = std::max(best_any, f);
      int i = pp.n() - 1;
      while (i >= 0 && ++pick[i] == pp.parts[i].size() + 1) pick[i--] = 0;
      if (i < 0) break;
    }
    CHECK(brute_force_optimal(pp).value == doctest::Approx(best_any).epsilon(1e-12));
  }
}

TEST_CASE("brute force refuses above the cap") {
  GenParams p;
  p.n = 3;
  p.l = 4;
  p.m = 2;
  const Instance inst = gen_random(p);
  const auto pp = build_partition_problem(inst);
  if (base_count(pp) > 8.0) CHECK_THROWS_AS(brute_force_optimal(pp, 8), Error);
}

}  // namespace
}  // namespace pma
