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

#ifndef PMA_PAYMENTS_HPP_
#define PMA_PAYMENTS_HPP_

#include <optional>
#include <vector>

#include "json.hpp"
#include "model.hpp"

namespace pma {

inline constexpr double kIcTieTol = 1e-9;
inline constexpr double kIcSlackTol = 1e-7;

struct PaymentSolution {
  int agent = 0;
  int action = 0;
  double min_expected_payment = 0.0;
  std::vector<double> payment_row;
};

// One agent's action menu in raw form (also used per type).
struct ActionMenu {
  std::vector<std::vector<double>> dists;
  std::vector<double> costs;
  int null_action = 0;
};

ActionMenu menu_of(const Instance& inst, int i);

// Actions within kIcTieTol of the best expected utility under `row`.
std::vector<int> ic_actions(const ActionMenu& menu, const std::vector<double>& row,
                            double tol = kIcTieTol);
std::vector<int> ic_actions(const Instance& inst, int i, const std::vector<double>& row,
                            double tol = kIcTieTol);

// Minimal expected payment inducing `a`; nullopt when a is not inducible.
std::optional<PaymentSolution> min_payment(const ActionMenu& menu, int a);
std::optional<PaymentSolution> min_payment(const Instance& inst, int i, int a);

// table[i][a]; nullopt entries are not inducible.
using PaymentTable = std::vector<std::vector<std::optional<PaymentSolution>>>;

PaymentTable min_payment_table(const Instance& inst);

// Twice the largest entry of the attaining rows over all inducible pairs.
double payment_bound(const PaymentTable& table);
double payment_bound(const Instance& inst);

nlohmann::json payment_table_to_json(const PaymentTable& table);
PaymentTable payment_table_from_json(const nlohmann::json& j);

}  // namespace pma

#endif  // PMA_PAYMENTS_HPP_
