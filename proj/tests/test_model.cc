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
#include <string>

#include "doctest.h"
#include "error.hpp"
#include "gen.hpp"
#include "model.hpp"
#include "oracles.hpp"

namespace pma {
namespace {

using nlohmann::json;

std::vector<std::string> issues_of(const json& j) {
  try {
    instance_from_json(j);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kValidation);
    return e.details();
  }
  return {};
}

bool has_issue(const std::vector<std::string>& issues, const std::string& needle) {
  for (const auto& s : issues)
    if (s.find(needle) != std::string::npos) return true;
  return false;
}

json two_agent_half_json() {
  json agent = {{"costs", {0.0, 0.1}}, {"dists", {{1.0, 0.0}, {0.5, 0.5}}}, {"null_action", 0}};
  return {{"q", 1},
          {"outcomes", {{0.0}, {1.0}}},
          {"null_outcome", 0},
          {"agents", {agent, agent}},
          {"reward", {{"family", "budget_additive"}, {"params", {{"w", {1.0}}, {"B", 1.0}}}}}};
}

TEST_CASE("minimal document loads with its sizes") {
  const Instance inst = load_instance(testing::t1_json().dump());
  CHECK(inst.n() == 1);
  CHECK(inst.agents[0].num_actions() == 2);
  CHECK(inst.m() == 2);
  CHECK(inst.q() == 1);
}

TEST_CASE("validation rejects bad distributions and costs") {
  auto j = testing::t1_json();
  j["agents"][0]["dists"][1] = {0.0, 0.9};
  CHECK(has_issue(issues_of(j), "distribution sum"));

  j = testing::t1_json();
  j["agents"][0]["costs"][1] = 1.5;
  CHECK(has_issue(issues_of(j), "cost out of range"));

  j = testing::t1_json();
  j["agents"][0]["costs"][0] = 0.1;
  CHECK(has_issue(issues_of(j), "null action cost"));

  j = testing::t1_json();
  j["outcomes"] = {{0.0}, {0.0}};
  CHECK(has_issue(issues_of(j), "duplicates"));
}

TEST_CASE("distribution sums within tolerance are normalized") {
  auto j = testing::t1_json();
  j["agents"][0]["dists"][1] = {0.0, 1.0 + 5e-10};
  const Instance inst = instance_from_json(j);
  CHECK(inst.dist(0, 1)[1] == 1.0);
}

TEST_CASE("malformed documents raise validation errors") {
  try {
    load_instance("{not json");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kValidation);
  }
  try {
    load_instance(R"({"q": 1})");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kValidation);
  }
}

TEST_CASE("decimal strings are accepted as numbers") {
  auto j = testing::t1_json();
  j["agents"][0]["costs"] = {"0", "0.5"};
  const Instance inst = testing::make_instance(j);
  CHECK(inst.cost(0, 1) == 0.5);
  CHECK(parse_number(json("0.25")) == 0.25);
}

TEST_CASE("expected reward of deterministic and mixed profiles") {
  const Instance a = testing::t1();
  CHECK(expected_reward_exact(a, {1}) == doctest::Approx(1.0));
  CHECK(expected_reward_exact(a, {0}) == doctest::Approx(0.0));
  const Instance b = testing::t2();
  CHECK(expected_reward_exact(b, {1}) == doctest::Approx(0.5));
  const Instance c = testing::make_instance(two_agent_half_json());
  CHECK(expected_reward_exact(c, {1, 1}) == doctest::Approx(0.75));
}

TEST_CASE("enumeration cap is enforced") {
  const Instance c = testing::make_instance(two_agent_half_json());
  try {
    expected_reward_exact(c, {1, 1}, 2);
    FAIL("expected a refusal");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kRefusal);
  }
}

TEST_CASE("Monte Carlo estimates") {
  const Instance a = testing::t1();
  const auto det = expected_reward_mc(a, {1}, 1000, 7);
  CHECK(det.value == 1.0);
  CHECK(det.std_error == 0.0);
  const Instance b = testing::t2();
  const auto e1 = expected_reward_mc(b, {1}, 100000, 3);
  CHECK(std::fabs(e1.value - 0.5) <= 0.01);
  const auto e2 = expected_reward_mc(b, {1}, 100000, 3);
  CHECK(e1.value == e2.value);
  CHECK(e1.std_error == e2.std_error);
}

TEST_CASE("Monte Carlo stays within five standard errors") {
  int inside = 0, trials = 0;
  for (uint64_t seed = 0; seed < 60; ++seed) {
    GenParams p;
    p.n = 2;
    p.l = 3;
    p.m = 3;
    p.seed = seed;
    const Instance inst = gen_random(p);
    const std::vector<int> profile = {static_cast<int>(seed % 3), static_cast<int>((seed / 3) % 3)};
    const double exact = expected_reward_exact(inst, profile);
    const auto est = expected_reward_mc(inst, profile, 100000, seed);
    ++trials;
    if (std::fabs(est.value - exact) <= 5 * est.std_error + 1e-12) ++inside;
  }
  CHECK(inside >= trials * 99 / 100);
}

TEST_CASE("expected rewards lie in the unit interval") {
  for (uint64_t seed = 0; seed < 40; ++seed) {
    GenParams p;
    p.n = 2;
    p.l = 3;
    p.m = 3;
    p.q = 1 + static_cast<int>(seed % 2);
    p.family = seed % 3 == 0 ? "exp_sum" : (seed % 3 == 1 ? "budget_additive" : "linear");
    p.seed = seed;
    const Instance inst = gen_random(p);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        const double r = expected_reward_exact(inst, {a, b});
        CHECK(r >= -1e-12);
        CHECK(r <= 1.0 + 1e-12);
      }
  }
}

TEST_CASE("swapping identical agents under a symmetric reward") {
  GenParams p;
  p.n = 2;
  p.l = 3;
  p.m = 3;
  p.seed = 11;
  Instance inst = gen_random(p);
  inst.agents[1] = inst.agents[0];
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      CHECK(expected_reward_exact(inst, {a, b}) == doctest::Approx(expected_reward_exact(inst, {b, a})).epsilon(1e-12));
}

TEST_CASE("principal utility of hand contracts") {
  const Instance a = testing::t1();
  CHECK(principal_utility(a, Contract{{{0.0, 0.0}}, {0}}) == doctest::Approx(0.0));
  CHECK(principal_utility(a, Contract{{{0.0, 0.5}}, {1}}) == doctest::Approx(0.5));
  const Instance b = testing::t2();
  CHECK(principal_utility(b, Contract{{{0.0, 0.4}}, {1}}) == doctest::Approx(0.3));
  const double mc = principal_utility(b, Contract{{{0.0, 0.4}}, {1}}, EvalMode::kMonteCarlo, 100000, 1);
  CHECK(std::fabs(mc - 0.3) < 0.01);
}

TEST_CASE("JSON round trips") {
  const Instance a = testing::make_instance(two_agent_half_json());
  const json j = instance_to_json(a);
  const Instance b = testing::make_instance(j);
  CHECK(digest_hex(instance_to_json(b)) == digest_hex(j));
  CHECK(digest_hex(j).size() == 16);
  const Contract c{{{0.0, 0.25}, {0.0, 0.5}}, {1, 1}};
  const Contract d = contract_from_json(contract_to_json(c));
  CHECK(d.payments == c.payments);
  CHECK(d.recommendations == c.recommendations);
}

}  // namespace
}  // namespace pma
