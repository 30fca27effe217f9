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

#ifndef PMA_BAYES_HPP_
#define PMA_BAYES_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "lp.hpp"
#include "model.hpp"
#include "payments.hpp"

namespace pma {

// Agents with private types. Type tuples are encoded in mixed radix with
// agent 0 most significant.
struct BayesianInstance {
  int num_types = 1;
  OutcomeSpace omega;
  RewardSpec reward;
  double reward_bound = 1.0;
  std::vector<std::vector<AgentSpec>> per_type;  // [agent][type]
  std::vector<std::vector<int>> support;
  std::vector<double> prob;

  int n() const { return static_cast<int>(per_type.size()); }
  int l() const { return per_type.empty() ? 0 : per_type[0][0].num_actions(); }
  int m() const { return omega.m(); }
  int num_profiles() const;  // |Theta|^n
  int encode(const std::vector<int>& types) const;
  std::vector<int> decode(int code) const;
  // Non-Bayesian instance of the given type tuple (reward bound to it).
  Instance type_instance(const std::vector<int>& types) const;
};

BayesianInstance load_bayes(const std::string& text);
BayesianInstance bayes_from_json(const nlohmann::json& j);
nlohmann::json bayes_to_json(const BayesianInstance& bi);
std::vector<std::string> validate_bayes(BayesianInstance& bi);

// Precomputed index sets and per-type payment data.
struct BayesContext {
  const BayesianInstance* bi = nullptr;
  std::vector<std::vector<int>> tuples;    // decoded type tuple per code
  std::vector<int> supp_code;              // codes of support tuples
  std::vector<int> supp_index;             // code -> support index or -1
  std::vector<std::vector<bool>> in_phi;   // [agent][code]
  std::vector<std::vector<std::vector<int>>> inducible;  // [agent][type] -> actions
  std::vector<std::vector<std::vector<std::optional<PaymentSolution>>>> pay;  // [agent][type][action]
  std::vector<Instance> supp_instance;     // per support index
  double tau = 0.0;

  bool is_inducible(int i, int type, int a) const;
};

BayesContext make_context(const BayesianInstance& bi);

// Solution of the relaxed or exact menu LP in dense form.
struct BayesSolution {
  int n = 0, L = 0, m = 0, P = 0;
  std::vector<double> xi;  // [i][code][a]
  std::vector<double> y;   // [i][code][a][w]
  std::vector<std::map<std::vector<int>, double>> t;  // per support index

  void init(const BayesianInstance& bi);
  double& XI(int i, int code, int a) { return xi[(static_cast<size_t>(i) * P + code) * L + a]; }
  double XI(int i, int code, int a) const { return xi[(static_cast<size_t>(i) * P + code) * L + a]; }
  double& Y(int i, int code, int a, int w) {
    return y[((static_cast<size_t>(i) * P + code) * L + a) * m + w];
  }
  double Y(int i, int code, int a, int w) const {
    return y[((static_cast<size_t>(i) * P + code) * L + a) * m + w];
  }
};

// Objective of the menu LP at sol.
double lp_objective(const BayesContext& ctx, const BayesSolution& sol);

// Largest violation of the menu LP constraints; `equality` selects the
// exact (equality) coupling of t and xi.
double lp_violation(const BayesContext& ctx, const BayesSolution& sol, bool equality);

// Irregular indices (i, code, a): positive y with zero xi.
std::vector<std::array<int, 3>> irregular_indices(const BayesContext& ctx, const BayesSolution& sol,
                                                  double tol = 1e-9);

struct Lp3Result {
  double value = 0.0;
  BayesSolution sol;
};

// Exact menu LP over every inducible profile of every support tuple.
Lp3Result solve_lp3_direct(const BayesContext& ctx, bool equality = true, long cap = 200000);

// Menu LP restricted to the listed (support index, profile) t-variables,
// with the relaxed coupling.
Lp3Result solve_restricted(const BayesContext& ctx,
                           const std::vector<std::pair<int, std::vector<int>>>& t_keys);

BayesSolution relaxed_to_equality(const BayesContext& ctx, const BayesSolution& sol);

BayesSolution regularize(const BayesContext& ctx, const BayesSolution& sol, double eps);

struct MenuEntry {
  double prob = 0.0;
  std::vector<int> profile;
  std::vector<std::vector<double>> payments;  // n x m
};

struct RandomizedMenu {
  std::vector<std::vector<MenuEntry>> entries;  // [code]; empty when unused
};

RandomizedMenu menu_from_solution(const BayesContext& ctx, const BayesSolution& sol);
double menu_value(const BayesContext& ctx, const RandomizedMenu& menu);
nlohmann::json menu_to_json(const BayesContext& ctx, const RandomizedMenu& menu);
RandomizedMenu menu_from_json(const BayesianInstance& bi, const nlohmann::json& j);

struct DsicMargin {
  int agent = 0;
  int true_code = 0;
  int report_type = 0;
  double margin = 0.0;
};

struct DsicReport {
  bool pass = true;
  double worst = 0.0;
  std::vector<DsicMargin> margins;
};

DsicReport check_dsic(const BayesContext& ctx, const RandomizedMenu& menu, double tol = 1e-6);

enum class OracleKind { kIrFosd, kDrApprox };

// Profile approximately maximizing lambda*R - sum w over the inducible
// profiles of support tuple `s`. w is [agent][action].
std::vector<int> approx_oracle(const BayesContext& ctx, int s, const std::vector<std::vector<double>>& w,
                               double eps, OracleKind kind, uint64_t seed);

// Layout of the dual variables: x, then y, then z, then d.
struct DualLayout {
  int dim = 0;
  std::vector<int> x_index;                        // [i * P + code] or -1
  std::vector<std::vector<std::vector<int>>> y_index;  // [i][s][a] or -1
  std::vector<std::string> names;
  std::vector<Cut> explicit_cuts;
};

DualLayout make_dual_layout(const BayesContext& ctx);

struct SeparationResult {
  bool feasible = true;
  Cut cut;
};

SeparationResult separation_for_dual(const BayesContext& ctx, const DualLayout& layout,
                                     const std::vector<double>& point, double eta, double eps,
                                     OracleKind kind, uint64_t seed, long* oracle_calls = nullptr);

struct BayesOptions {
  double rho = 0.05;
  OracleKind kind = OracleKind::kIrFosd;
  uint64_t seed = 0;
  bool verify = true;
};

struct BayesRun {
  RandomizedMenu menu;
  double value = 0.0;          // menu value
  double lp8_value = 0.0;
  double eta_low = 0.0, eta_high = 1.0;
  int binary_steps = 0;
  long ellipsoid_iterations = 0;
  long oracle_calls = 0;
  size_t cut_count = 0;
  DsicReport dsic;
  BayesSolution solution;
};

BayesRun bayes_solve(const BayesianInstance& bi, const BayesOptions& opt = {});

// Lift of a non-Bayesian instance to a single-type Bayesian instance.
BayesianInstance single_type(const Instance& inst);

}  // namespace pma

#endif  // PMA_BAYES_HPP_
