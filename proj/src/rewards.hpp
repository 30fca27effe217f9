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

#ifndef PMA_REWARDS_HPP_
#define PMA_REWARDS_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace pma {

struct Instance;

enum class RewardFamily {
  kLinear,
  kBudgetAdditive,
  kCoverageMax,
  kExpSum,
  kLabelCoverSmooth,
  kCustomTable,
};

const char* to_string(RewardFamily f);
std::optional<RewardFamily> family_from_string(const std::string& s);

struct CoverEdge {
  int u = 0, v = 0;  // stacked coordinates
};

struct LabelEdge {
  int u = 0, v = 0;      // agents
  std::vector<int> pi;   // label of v -> label of u
};

// Succinct reward g over stacked outcome tuples (n blocks of q numbers).
// Parameters are normalized by bind() once n, q and the outcome set are
// known.
struct RewardSpec {
  RewardFamily family = RewardFamily::kLinear;
  nlohmann::json params = nlohmann::json::object();
  std::vector<std::string> declared_tags;

  // Bound state.
  int n = 0, q = 0;
  std::vector<double> w;           // linear, budget_additive: length n*q
  double budget = 1.0;             // budget_additive
  std::vector<CoverEdge> cover;    // coverage_max
  std::vector<double> k;           // coverage_max per-coordinate divisors
  double scale = 1.0;              // coverage_max, label_cover_smooth
  double kappa = 1.0, cap = 1.0;   // exp_sum
  double smooth_m = 20.0;          // label_cover_smooth
  std::vector<LabelEdge> labels;   // label_cover_smooth
  std::map<std::vector<double>, double> table;  // custom_table

  // Throws Error(kValidation) on malformed params.
  void bind(int n_agents, int dim_q, const std::vector<std::vector<double>>& outcomes);

  // g at a stacked tuple of length n*q.
  double eval(const double* x) const;
  double eval(const std::vector<double>& x) const { return eval(x.data()); }

  // Whether g is defined off the outcome tuples.
  bool is_extensible() const { return family != RewardFamily::kCustomTable; }

  nlohmann::json to_json() const;
};

RewardSpec reward_from_json(const nlohmann::json& j);

enum class Property { kIncreasing, kDrSubmodular, kIrSupermodular };

const char* to_string(Property p);
std::optional<Property> property_from_string(const std::string& s);

struct PropertyVerdict {
  bool pass = true;
  bool exhaustive = true;
  long checked = 0;
  // Counterexample (w, w', w'') as stacked vectors; w'' empty for kIncreasing.
  std::vector<double> w1, w2, w3;
  double violation = 0.0;
  std::string message;
};

struct PropertyOptions {
  bool exhaustive = true;
  long cap = 2000000;  // maximum number of checked tuples in exhaustive mode
  long trials = 10000;
  uint64_t seed = 0;
  double tol = 1e-9;
};

// Checks the property on the grid spanned by the per-coordinate outcome
// values of inst, restricted to tuples whose sums stay in the bounding box
// of the outcome tuples.
PropertyVerdict check_property(const RewardSpec& spec, const Instance& inst,
                               Property property, const PropertyOptions& opt = {});

// Canonical order of agent i's actions among `actions`: null first, then
// ascending cost, ties by index.
std::vector<int> canonical_order(const Instance& inst, int agent,
                                 const std::vector<int>& actions);
std::vector<int> canonical_order(const Instance& inst, int agent);

struct FosdPair {
  int agent = 0;
  int lower = 0, upper = 0;  // cheaper and costlier action of the pair
  bool pass = true;
  // Flow x[w'][w] moving mass of `lower` upward onto `upper`.
  std::vector<std::vector<double>> flow;
  std::vector<double> farkas;
  // A comprehensive set violating the condition (outcome indices).
  std::vector<int> witness_set;
};

struct FosdVerdict {
  bool pass = true;
  std::vector<FosdPair> pairs;
};

// Transport-LP decision of the FOSD condition for each agent's consecutive
// pairs in canonical order. When `actions` is given it restricts each
// agent's chain to the listed actions.
FosdVerdict check_fosd(const Instance& inst,
                       const std::vector<std::vector<int>>* actions = nullptr);

// Enumerates comprehensive subsets of the outcome set; requires m <= 12.
FosdVerdict fosd_bruteforce(const Instance& inst,
                            const std::vector<std::vector<int>>* actions = nullptr);

// Max over consecutive pairs and comprehensive sets of the condition's
// violation for a distribution pair (helper exposed for tests).
bool dominates_on_all_comprehensive(const std::vector<std::vector<double>>& outcomes,
                                    const std::vector<double>& cheap,
                                    const std::vector<double>& costly,
                                    std::vector<int>* witness, double tol = 1e-9);

}  // namespace pma

#endif  // PMA_REWARDS_HPP_
