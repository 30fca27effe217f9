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

#ifndef PMA_MODEL_HPP_
#define PMA_MODEL_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "rewards.hpp"

namespace pma {

inline constexpr double kProbTol = 1e-9;
inline constexpr long kDefaultEnumCap = 1000000;

struct OutcomeSpace {
  int q = 1;
  std::vector<std::vector<double>> outcomes;
  int null_index = -1;

  int m() const { return static_cast<int>(outcomes.size()); }
};

struct Action {
  double cost = 0.0;
  std::vector<double> dist;
};

struct AgentSpec {
  std::vector<Action> actions;
  int null_action = 0;

  int num_actions() const { return static_cast<int>(actions.size()); }
};

struct Instance {
  std::vector<AgentSpec> agents;
  OutcomeSpace omega;
  RewardSpec reward;
  // Upper end of the admissible reward range on outcome tuples.
  double reward_bound = 1.0;

  int n() const { return static_cast<int>(agents.size()); }
  int m() const { return omega.m(); }
  int q() const { return omega.q; }
  const std::vector<double>& dist(int i, int a) const { return agents[i].actions[a].dist; }
  double cost(int i, int a) const { return agents[i].actions[a].cost; }
};

struct Contract {
  std::vector<std::vector<double>> payments;  // n x m
  std::vector<int> recommendations;
};

// Parses and validates; throws Error(kValidation) listing every violation.
Instance load_instance(const std::string& text);
Instance instance_from_json(const nlohmann::json& j);
nlohmann::json instance_to_json(const Instance& inst);

// Collects invariant violations (empty when valid); binds the reward.
std::vector<std::string> validate_instance(Instance& inst, long range_cap = 200000);

double parse_number(const nlohmann::json& v);

double expected_reward_exact(const Instance& inst, const std::vector<int>& profile,
                             long cap = kDefaultEnumCap);

struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
  long samples = 0;
};

McEstimate expected_reward_mc(const Instance& inst, const std::vector<int>& profile,
                              long samples, uint64_t seed);

// Exact when m^n <= cap, otherwise Monte Carlo with the given budget.
double expected_reward(const Instance& inst, const std::vector<int>& profile,
                       long cap = kDefaultEnumCap, long samples = 200000,
                       uint64_t seed = 0);

// Per-agent weighted support of stacked-vector blocks.
struct BlockDist {
  std::vector<std::vector<double>> points;  // each of length q
  std::vector<double> probs;
};

// E[g] under independent per-agent block distributions, by enumeration.
double expected_reward_blocks(const RewardSpec& g, int q,
                              const std::vector<BlockDist>& blocks);

enum class EvalMode { kExact, kMonteCarlo };

double expected_payment(const Instance& inst, const Contract& c);
double principal_utility(const Instance& inst, const Contract& c,
                         EvalMode mode = EvalMode::kExact, long samples = 200000,
                         uint64_t seed = 0);

nlohmann::json contract_to_json(const Contract& c);
Contract contract_from_json(const nlohmann::json& j);

// Stacks the outcome vectors of an outcome-index tuple.
std::vector<double> stack_tuple(const Instance& inst, const std::vector<int>& idx);

// 64-bit FNV-1a digest of the canonical JSON dump.
std::string digest_hex(const nlohmann::json& j);

}  // namespace pma

#endif  // PMA_MODEL_HPP_
