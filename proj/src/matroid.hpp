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

#ifndef PMA_MATROID_HPP_
#define PMA_MATROID_HPP_

#include <map>
#include <utility>
#include <vector>

#include "model.hpp"
#include "payments.hpp"

namespace pma {

struct Element {
  int agent = 0;
  int action = 0;
  double weight = 0.0;
  std::vector<double> row;  // attaining payment row; empty for weighted variants
};

// The 1-partition matroid problem. `inst` must outlive the problem.
struct PartitionProblem {
  const Instance* inst = nullptr;
  std::vector<std::vector<Element>> parts;  // parts[i] lists G_i; null action included
  double reward_scale = 1.0;
  long enum_cap = kDefaultEnumCap;
  long mc_samples = 200000;
  uint64_t seed = 0;

  int n() const { return static_cast<int>(parts.size()); }
  // Position of action a within part i, or -1.
  int position(int i, int a) const;
  const Element* element(int i, int a) const;

  // Scaled expected reward of a full action profile (memoized).
  double reward(const std::vector<int>& profile) const;
  double weight(const std::vector<int>& profile) const;

 private:
  mutable std::map<std::vector<int>, double> cache_;
};

PartitionProblem build_partition_problem(const Instance& inst, const PaymentTable* table = nullptr);

// Parts restricted to `actions[i]` with externally supplied weights.
PartitionProblem build_weighted_problem(const Instance& inst,
                                        const std::vector<std::vector<int>>& actions,
                                        const std::vector<std::vector<double>>& weights,
                                        double reward_scale = 1.0);

// Full profile of an independent set given as (agent, action) pairs.
std::vector<int> profile_of(const PartitionProblem& pp, const std::vector<std::pair<int, int>>& set);

double f_value(const PartitionProblem& pp, const std::vector<int>& profile);
double f_value(const PartitionProblem& pp, const std::vector<std::pair<int, int>>& set);

Contract contract_from_profile(const PartitionProblem& pp, const std::vector<int>& profile);
Contract contract_from_set(const PartitionProblem& pp, const std::vector<std::pair<int, int>>& set);

struct MatroidSolution {
  std::vector<int> profile;
  double value = 0.0;
  double reward = 0.0;
  double payment = 0.0;
  Contract contract;
};

MatroidSolution finish_solution(const PartitionProblem& pp, std::vector<int> profile);

// Exhaustive maximum over bases; lexicographically smallest profile on ties.
MatroidSolution brute_force_optimal(const PartitionProblem& pp, long cap = kDefaultEnumCap);

// Number of bases (product of part sizes).
double base_count(const PartitionProblem& pp);

}  // namespace pma

#endif  // PMA_MATROID_HPP_
