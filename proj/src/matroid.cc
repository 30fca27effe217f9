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

#include "matroid.hpp"

#include <algorithm>

#include "error.hpp"
#include "lp.hpp"

namespace pma {

int PartitionProblem::position(int i, int a) const {
  for (size_t k = 0; k < parts[i].size(); ++k)
    if (parts[i][k].action == a) return static_cast<int>(k);
  return -1;
}

const Element* PartitionProblem::element(int i, int a) const {
  const int k = position(i, a);
  return k < 0 ? nullptr : &parts[i][k];
}

double PartitionProblem::reward(const std::vector<int>& profile) const {
  auto it = cache_.find(profile);
  if (it != cache_.end()) return it->second;
  const double r = reward_scale * expected_reward(*inst, profile, enum_cap, mc_samples, seed);
  cache_.emplace(profile, r);
  return r;
}

double PartitionProblem::weight(const std::vector<int>& profile) const {
  double w = 0.0;
  for (int i = 0; i < n(); ++i) {
    const Element* e = element(i, profile[i]);
    if (!e) throw Error(ErrorCode::kUsage, "profile uses an action outside the ground set");
    w += e->weight;
  }
  return w;
}

PartitionProblem build_partition_problem(const Instance& inst, const PaymentTable* table) {
  PaymentTable own;
  if (!table) {
    own = min_payment_table(inst);
    table = &own;
  }
  PartitionProblem pp;
  pp.inst = &inst;
  pp.parts.resize(inst.n());
  for (int i = 0; i < inst.n(); ++i) {
    for (int a = 0; a < inst.agents[i].num_actions(); ++a) {
      const auto& sol = (*table)[i][a];
      if (!sol) continue;
      pp.parts[i].push_back({i, a, sol->min_expected_payment, sol->payment_row});
    }
    if (pp.position(i, inst.agents[i].null_action) < 0)
      throw Error(ErrorCode::kInternal, "null action missing from the ground set");
  }
  return pp;
}

PartitionProblem build_weighted_problem(const Instance& inst, const std::vector<std::vector<int>>& actions,
                                        const std::vector<std::vector<double>>& weights,
                                        double reward_scale) {
  PartitionProblem pp;
  pp.inst = &inst;
  pp.reward_scale = reward_scale;
  pp.parts.resize(inst.n());
  for (int i = 0; i < inst.n(); ++i) {
    for (size_t k = 0; k < actions[i].size(); ++k) pp.parts[i].push_back({i, actions[i][k], weights[i][k], {}});
    if (pp.position(i, inst.agents[i].null_action) < 0)
      throw Error(ErrorCode::kUsage, "weighted problem must contain every null action");
  }
  return pp;
}

std::vector<int> profile_of(const PartitionProblem& pp, const std::vector<std::pair<int, int>>& set) {
  std::vector<int> profile(pp.n());
  std::vector<bool> used(pp.n(), false);
  for (int i = 0; i < pp.n(); ++i) profile[i] = pp.inst->agents[i].null_action;
  for (const auto& [i, a] : set) {
    if (i < 0 || i >= pp.n() || used[i] || pp.position(i, a) < 0)
      throw Error(ErrorCode::kUsage, "set is not independent in the partition matroid");
    used[i] = true;
    profile[i] = a;
  }
  return profile;
}

double f_value(const PartitionProblem& pp, const std::vector<int>& profile) {
  return pp.reward(profile) - pp.weight(profile);
}

double f_value(const PartitionProblem& pp, const std::vector<std::pair<int, int>>& set) {
  return f_value(pp, profile_of(pp, set));
}

Contract contract_from_profile(const PartitionProblem& pp, const std::vector<int>& profile) {
  Contract c;
  c.recommendations = profile;
  for (int i = 0; i < pp.n(); ++i) {
    const Element* e = pp.element(i, profile[i]);
    if (!e) throw Error(ErrorCode::kUsage, "profile uses an action outside the ground set");
    c.payments.push_back(e->row.empty() ? std::vector<double>(pp.inst->m(), 0.0) : e->row);
  }
  return c;
}

Contract contract_from_set(const PartitionProblem& pp, const std::vector<std::pair<int, int>>& set) {
  return contract_from_profile(pp, profile_of(pp, set));
}

MatroidSolution finish_solution(const PartitionProblem& pp, std::vector<int> profile) {
  MatroidSolution s;
  s.reward = pp.reward(profile);
  s.payment = pp.weight(profile);
  s.value = s.reward - s.payment;
  s.contract = contract_from_profile(pp, profile);
  s.profile = std::move(profile);
  return s;
}

double base_count(const PartitionProblem& pp) {
  double c = 1.0;
  for (const auto& part : pp.parts) c *= static_cast<double>(part.size());
  return c;
}

MatroidSolution brute_force_optimal(const PartitionProblem& pp, long cap) {
  if (base_count(pp) > static_cast<double>(cap))
    throw Error(ErrorCode::kRefusal, "number of bases exceeds the enumeration cap");
  const int n = pp.n();
  // Enumerate profiles in lexicographic order of action indices.
  std::vector<std::vector<int>> sorted(n);
  for (int i = 0; i < n; ++i) {
    for (const auto& e : pp.parts[i]) sorted[i].push_back(e.action);
    std::sort(sorted[i].begin(), sorted[i].end());
  }
  std::vector<int> idx(n, 0), profile(n), best;
  double best_value = -kInf;
  while (true) {
    for (int i = 0; i < n; ++i) profile[i] = sorted[i][idx[i]];
    const double v = f_value(pp, profile);
    if (v > best_value + 1e-12) {
      best_value = v;
      best = profile;
    }
    int k = n - 1;
    while (k >= 0 && ++idx[k] == static_cast<int>(sorted[k].size())) idx[k--] = 0;
    if (k < 0) break;
  }
  return finish_solution(pp, best);
}

}  // namespace pma
