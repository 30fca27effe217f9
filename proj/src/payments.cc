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

#include "payments.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"
#include "lp.hpp"

namespace pma {

using nlohmann::json;

ActionMenu menu_of(const Instance& inst, int i) {
  ActionMenu menu;
  for (const auto& act : inst.agents[i].actions) {
    menu.dists.push_back(act.dist);
    menu.costs.push_back(act.cost);
  }
  menu.null_action = inst.agents[i].null_action;
  return menu;
}

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

}  // namespace

std::vector<int> ic_actions(const ActionMenu& menu, const std::vector<double>& row, double tol) {
  const int l = static_cast<int>(menu.costs.size());
  std::vector<double> u(l);
  double best = -kInf;
  for (int a = 0; a < l; ++a) {
    u[a] = dot(menu.dists[a], row) - menu.costs[a];
    best = std::max(best, u[a]);
  }
  std::vector<int> out;
  for (int a = 0; a < l; ++a)
    if (u[a] >= best - tol) out.push_back(a);
  return out;
}

std::vector<int> ic_actions(const Instance& inst, int i, const std::vector<double>& row, double tol) {
  return ic_actions(menu_of(inst, i), row, tol);
}

std::optional<PaymentSolution> min_payment(const ActionMenu& menu, int a) {
  const int l = static_cast<int>(menu.costs.size());
  const int m = static_cast<int>(menu.dists[a].size());
  PaymentSolution sol;
  sol.action = a;
  if (a == menu.null_action && menu.costs[a] == 0.0) {
    sol.payment_row.assign(m, 0.0);
    return sol;
  }
  LinearProgram lp;
  lp.sense = Sense::kMin;
  for (int w = 0; w < m; ++w) lp.add_var(menu.dists[a][w]);
  for (int b = 0; b < l; ++b) {
    if (b == a) continue;
    std::vector<double> row(m);
    bool same = true;
    for (int w = 0; w < m; ++w) {
      row[w] = menu.dists[a][w] - menu.dists[b][w];
      if (row[w] != 0.0) same = false;
    }
    const double rhs = menu.costs[a] - menu.costs[b];
    if (same) {
      if (rhs > 0.0) return std::nullopt;
      continue;
    }
    lp.add_row(row, Rel::kGe, rhs);
  }
  const auto res = solve_lp(lp);
  if (res.status == LpStatus::kInfeasible) return std::nullopt;
  if (res.status != LpStatus::kOptimal)
    throw Error(ErrorCode::kNumerical, "min-payment LP failed: " + res.message);
  sol.payment_row = res.x;
  for (double& p : sol.payment_row) p = std::max(p, 0.0);
  sol.min_expected_payment = dot(menu.dists[a], sol.payment_row);
  const double ua = sol.min_expected_payment - menu.costs[a];
  for (int b = 0; b < l; ++b) {
    if (dot(menu.dists[b], sol.payment_row) - menu.costs[b] > ua + kIcSlackTol)
      throw Error(ErrorCode::kNumerical, "min-payment row violates incentive compatibility");
  }
  return sol;
}

std::optional<PaymentSolution> min_payment(const Instance& inst, int i, int a) {
  auto sol = min_payment(menu_of(inst, i), a);
  if (sol) sol->agent = i;
  return sol;
}

PaymentTable min_payment_table(const Instance& inst) {
  PaymentTable table(inst.n());
  for (int i = 0; i < inst.n(); ++i) {
    const auto menu = menu_of(inst, i);
    for (int a = 0; a < inst.agents[i].num_actions(); ++a) {
      auto sol = min_payment(menu, a);
      if (sol) sol->agent = i;
      table[i].push_back(std::move(sol));
    }
  }
  return table;
}

double payment_bound(const PaymentTable& table) {
  double top = 0.0;
  for (const auto& agent : table)
    for (const auto& sol : agent)
      if (sol)
        for (double p : sol->payment_row) top = std::max(top, p);
  return 2.0 * top;
}

double payment_bound(const Instance& inst) { return payment_bound(min_payment_table(inst)); }

json payment_table_to_json(const PaymentTable& table) {
  json out = json::array();
  for (const auto& agent : table) {
    json row = json::array();
    for (const auto& sol : agent) {
      if (!sol) {
        row.push_back(nullptr);
        continue;
      }
      row.push_back({{"agent", sol->agent},
                     {"action", sol->action},
                     {"min_expected_payment", sol->min_expected_payment},
                     {"payment_row", sol->payment_row}});
    }
    out.push_back(row);
  }
  return out;
}

PaymentTable payment_table_from_json(const json& j) {
  PaymentTable table;
  for (const auto& agent : j) {
    table.emplace_back();
    for (const auto& e : agent) {
      if (e.is_null()) {
        table.back().push_back(std::nullopt);
        continue;
      }
      PaymentSolution sol;
      sol.agent = e.at("agent").get<int>();
      sol.action = e.at("action").get<int>();
      sol.min_expected_payment = e.at("min_expected_payment").get<double>();
      sol.payment_row = e.at("payment_row").get<std::vector<double>>();
      table.back().push_back(std::move(sol));
    }
  }
  return table;
}

}  // namespace pma
