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
#include "oracles.hpp"
#include "supermod.hpp"

namespace pma {
namespace {

using nlohmann::json;

TEST_CASE("sfm on a cut function") {
  const SetFunction cut = [](const std::vector<bool>& s) { return s[0] != s[1] ? 1.0 : 0.0; };
  const auto r = sfm_min_norm(cut, 2);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(0.0));
  CHECK(r.set[0] == r.set[1]);
}

TEST_CASE("sfm on a modular function") {
  const std::vector<double> w = {-1.0, 2.0, -3.0};
  const SetFunction f = [&](const std::vector<bool>& s) {
    double v = 0.0;
    for (int e = 0; e < 3; ++e)
      if (s[e]) v += w[e];
    return v;
  };
  const auto r = sfm_min_norm(f, 3);
  CHECK(r.set == std::vector<bool>{true, false, true});
  CHECK(r.value == doctest::Approx(-4.0));
}

TEST_CASE("sfm matches enumeration on coverage plus modular functions") {
  for (uint64_t seed = 0; seed < 30; ++seed) {
    const int n = 4 + static_cast<int>(seed % 9);
    const auto f = testing::random_coverage_modular(seed, n);
    const auto r = sfm_min_norm(f, n);
    const double truth = testing::enumerate_min(f, n);
    CHECK(r.value == truth);
    CHECK(f(r.set) == r.value);
  }
}

TEST_CASE("ir solver on a single agent") {
  const Instance inst = testing::t1();
  const auto sol = solve_ir_fosd(build_partition_problem(inst));
  CHECK(sol.profile == std::vector<int>{1});
  CHECK(sol.value == doctest::Approx(0.5));
}

TEST_CASE("ir solver with unaffordable actions returns the null profile") {
  json j = testing::t1_json();
  j["agents"][0]["costs"] = {0.0, 0.9};
  j["reward"]["params"]["w"] = {0.5};
  const Instance inst = testing::make_instance(j);
  const auto sol = solve_ir_fosd(build_partition_problem(inst));
  CHECK(sol.profile == std::vector<int>{0});
  CHECK(sol.value == doctest::Approx(0.0));
}

TEST_CASE("ir solver refuses non-fosd chains") {
  json j = testing::t1_json();
  j["outcomes"] = {{0.0}, {0.5}, {1.0}};
  j["agents"][0]["costs"] = {0.0, 0.1, 0.2};
  j["agents"][0]["dists"] = {{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.5, 0.0, 0.5}};
  const Instance inst = testing::make_instance(j);
  try {
    solve_ir_fosd(build_partition_problem(inst));
    FAIL("expected refusal");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kRefusal);
  }
}

Instance ir_instance(uint64_t seed) {
  GenParams p;
  p.n = 1 + static_cast<int>(seed % 3);
  p.l = 2 + static_cast<int>((seed / 3) % 2);
  p.m = 2 + static_cast<int>((seed / 6) % 2);
  p.seed = seed;
  return gen_random(p);
}

TEST_CASE("ir solver equals brute force and its minimizer is prefix-closed") {
  for (uint64_t seed = 0; seed < 60; ++seed) {
    const Instance inst = ir_instance(seed);
    const auto pp = build_partition_problem(inst);
    const auto sol = solve_ir_fosd(pp);
    CHECK(sol.value == doctest::Approx(brute_force_optimal(pp).value).epsilon(1e-6));
    CHECK(sol.value == doctest::Approx(f_value(pp, sol.profile)).epsilon(1e-6));
    const auto enc = make_encoding(pp);
    // Re-encode the returned profile and check the encoding is consistent.
    std::vector<bool> set(enc.size(), false);
    std::vector<int> lv(pp.n(), 0);
    for (int i = 0; i < pp.n(); ++i)
      for (size_t k = 0; k < enc.chains[i].size(); ++k)
        if (enc.chains[i][k] == sol.profile[i]) lv[i] = static_cast<int>(k);
    for (int e = 0; e < enc.size(); ++e) set[e] = lv[enc.elements[e].first] >= enc.elements[e].second;
    CHECK(enc.violations(set) == 0);
    CHECK(enc.profile(enc.levels(set)) == sol.profile);
    CHECK(encoded_value(pp, enc, set) == doctest::Approx(-sol.value).epsilon(1e-9));
  }
}

TEST_CASE("penalized encoding is submodular on sampled probes") {
  Rng rng(3);
  for (uint64_t seed = 0; seed < 10; ++seed) {
    GenParams p;
    p.n = 3;
    p.l = 3;
    p.m = 3;
    p.seed = seed;
    const Instance inst = gen_random(p);
    const auto pp = build_partition_problem(inst);
    const auto enc = make_encoding(pp);
    const int g = enc.size();
    if (g == 0) continue;
    for (int t = 0; t < 1000; ++t) {
      std::vector<bool> small(g), big(g);
      for (int e = 0; e < g; ++e) {
        big[e] = rng.uniform() < 0.5;
        small[e] = big[e] && rng.uniform() < 0.5;
      }
      const int x = rng.below_int(g);
      if (big[x]) continue;
      auto s2 = small, b2 = big;
      s2[x] = b2[x] = true;
      const double ds = encoded_value(pp, enc, s2) - encoded_value(pp, enc, small);
      const double db = encoded_value(pp, enc, b2) - encoded_value(pp, enc, big);
      CHECK(ds >= db - 1e-9);
    }
  }
}

std::vector<int> level_of(const std::vector<std::vector<int>>& chains, const std::vector<int>& profile) {
  std::vector<int> lv(profile.size());
  for (size_t i = 0; i < profile.size(); ++i)
    lv[i] = static_cast<int>(std::find(chains[i].begin(), chains[i].end(), profile[i]) - chains[i].begin());
  return lv;
}

TEST_CASE("ordered supermodularity") {
  SUBCASE("modular functions pass") {
    json j = testing::t1_json();
    j["agents"][0]["costs"] = {0.0, 0.0};
    const Instance inst = testing::make_instance(j);
    const auto v = check_ordered_supermodular(build_partition_problem(inst));
    CHECK(v.pass);
    CHECK(v.checked > 0);
  }
  SUBCASE("increasing-return fosd instances pass") {
    for (uint64_t seed = 0; seed < 40; ++seed) {
      const Instance inst = ir_instance(seed);
      CHECK(check_ordered_supermodular(build_partition_problem(inst)).pass);
    }
  }
  SUBCASE("coverage instances yield checked witnesses") {
    int found = 0;
    for (uint64_t seed = 0; seed < 30; ++seed) {
      GenParams p;
      p.n = 2 + static_cast<int>(seed % 2);
      p.l = 3;
      p.m = 3;
      p.q = 2;
      p.family = "coverage_max";
      p.seed = seed;
      const Instance inst = gen_random(p);
      const auto pp = build_partition_problem(inst);
      const auto v = check_ordered_supermodular(pp);
      if (v.pass) continue;
      ++found;
      const auto chains = lattice_chains(pp);
      const auto la = level_of(chains, v.witness_a), lb = level_of(chains, v.witness_b);
      std::vector<int> meet(pp.n()), join(pp.n());
      for (int i = 0; i < pp.n(); ++i) {
        meet[i] = chains[i][std::min(la[i], lb[i])];
        join[i] = chains[i][std::max(la[i], lb[i])];
      }
      CHECK(f_value(pp, meet) + f_value(pp, join) < f_value(pp, v.witness_a) + f_value(pp, v.witness_b) - 1e-9);
    }
    CHECK(found > 0);
  }
}

}  // namespace
}  // namespace pma
