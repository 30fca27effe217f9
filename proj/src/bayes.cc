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

#include "bayes.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "error.hpp"
#include "matroid.hpp"
#include "rewards.hpp"
#include "rng.hpp"
#include "submod.hpp"
#include "supermod.hpp"

namespace pma {

using nlohmann::json;

int BayesianInstance::num_profiles() const {
  int p = 1;
  for (int i = 0; i < n(); ++i) p *= num_types;
  return p;
}

int BayesianInstance::encode(const std::vector<int>& types) const {
  int c = 0;
  for (int i = 0; i < n(); ++i) c = c * num_types + types[i];
  return c;
}

std::vector<int> BayesianInstance::decode(int code) const {
  std::vector<int> t(n());
  for (int i = n() - 1; i >= 0; --i) {
    t[i] = code % num_types;
    code /= num_types;
  }
  return t;
}

Instance BayesianInstance::type_instance(const std::vector<int>& types) const {
  Instance inst;
  inst.omega = omega;
  inst.reward = reward;
  inst.reward_bound = reward_bound;
  for (int i = 0; i < n(); ++i) inst.agents.push_back(per_type[i][types[i]]);
  inst.reward.bind(n(), omega.q, omega.outcomes);
  return inst;
}

BayesianInstance bayes_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kValidation, "Bayesian instance must be a JSON object");
  if (j.contains("version") && j["version"] != "pma-bayes-1")
    throw Error(ErrorCode::kValidation, "unsupported version " + j["version"].dump());
  for (const char* key : {"q", "outcomes", "reward", "types", "per_type", "support"})
    if (!j.contains(key)) throw Error(ErrorCode::kValidation, std::string("missing field \"") + key + "\"");
  BayesianInstance bi;
  bi.omega.q = j["q"].get<int>();
  for (const auto& o : j["outcomes"]) {
    std::vector<double> v;
    for (const auto& e : o) v.push_back(parse_number(e));
    bi.omega.outcomes.push_back(std::move(v));
  }
  if (j.contains("null_outcome") && !j["null_outcome"].is_null()) bi.omega.null_index = j["null_outcome"].get<int>();
  bi.reward = reward_from_json(j["reward"]);
  if (j.contains("reward_bound")) bi.reward_bound = parse_number(j["reward_bound"]);
  bi.num_types = j["types"].get<int>();
  for (const auto& agent : j["per_type"]) {
    std::vector<AgentSpec> types;
    for (const auto& t : agent) {
      AgentSpec spec;
      if (!t.contains("costs") || !t.contains("dists"))
        throw Error(ErrorCode::kValidation, "per_type entries need \"costs\" and \"dists\"");
      if (t["costs"].size() != t["dists"].size())
        throw Error(ErrorCode::kValidation, "dimension mismatch between costs and dists");
      for (size_t a = 0; a < t["costs"].size(); ++a) {
        Action act;
        act.cost = parse_number(t["costs"][a]);
        for (const auto& p : t["dists"][a]) act.dist.push_back(parse_number(p));
        spec.actions.push_back(std::move(act));
      }
      spec.null_action = t.value("null_action", 0);
      types.push_back(std::move(spec));
    }
    bi.per_type.push_back(std::move(types));
  }
  for (const auto& s : j["support"]) {
    bi.support.push_back(s.at("types").get<std::vector<int>>());
    bi.prob.push_back(parse_number(s.at("prob")));
  }
  return bi;
}

BayesianInstance load_bayes(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kValidation, std::string("malformed JSON: ") + e.what());
  }
  auto bi = bayes_from_json(j);
  auto issues = validate_bayes(bi);
  if (!issues.empty()) throw Error(ErrorCode::kValidation, "invalid Bayesian instance: " + issues[0], issues);
  return bi;
}

json bayes_to_json(const BayesianInstance& bi) {
  json j;
  j["version"] = "pma-bayes-1";
  j["q"] = bi.omega.q;
  j["outcomes"] = bi.omega.outcomes;
  if (bi.omega.null_index >= 0) j["null_outcome"] = bi.omega.null_index;
  j["reward"] = bi.reward.to_json();
  if (bi.reward_bound != 1.0) j["reward_bound"] = bi.reward_bound;
  j["types"] = bi.num_types;
  json per = json::array();
  for (const auto& agent : bi.per_type) {
    json types = json::array();
    for (const auto& spec : agent) {
      json costs = json::array(), dists = json::array();
      for (const auto& act : spec.actions) {
        costs.push_back(act.cost);
        dists.push_back(act.dist);
      }
      types.push_back({{"costs", costs}, {"dists", dists}, {"null_action", spec.null_action}});
    }
    per.push_back(types);
  }
  j["per_type"] = per;
  json supp = json::array();
  for (size_t s = 0; s < bi.support.size(); ++s) supp.push_back({{"types", bi.support[s]}, {"prob", bi.prob[s]}});
  j["support"] = supp;
  return j;
}

std::vector<std::string> validate_bayes(BayesianInstance& bi) {
  std::vector<std::string> issues;
  if (bi.num_types < 1) issues.push_back("types must be a positive integer");
  if (bi.n() < 1) issues.push_back("at least one agent is required");
  for (int i = 0; i < bi.n(); ++i) {
    if (static_cast<int>(bi.per_type[i].size()) != bi.num_types) {
      issues.push_back("agent " + std::to_string(i) + ": per_type must list every type");
      continue;
    }
    for (int k = 0; k < bi.num_types; ++k) {
      if (bi.per_type[i][k].num_actions() != bi.l())
        issues.push_back("agent " + std::to_string(i) + ": action count differs across types");
      if (bi.per_type[i][k].null_action != bi.per_type[0][0].null_action)
        issues.push_back("agent " + std::to_string(i) + ": null action differs across types");
    }
  }
  if (!issues.empty()) return issues;
  for (int k = 0; k < bi.num_types; ++k) {
    Instance inst = {};
    inst.omega = bi.omega;
    inst.reward = bi.reward;
    inst.reward_bound = bi.reward_bound;
    for (int i = 0; i < bi.n(); ++i) inst.agents.push_back(bi.per_type[i][k]);
    for (const auto& msg : validate_instance(inst)) issues.push_back("type " + std::to_string(k) + ": " + msg);
    for (int i = 0; i < bi.n(); ++i) bi.per_type[i][k] = inst.agents[i];
  }
  if (bi.support.empty()) issues.push_back("support is empty");
  double total = 0.0;
  std::set<std::vector<int>> seen;
  for (size_t s = 0; s < bi.support.size(); ++s) {
    const auto& t = bi.support[s];
    bool ok = static_cast<int>(t.size()) == bi.n();
    for (int v : t) ok = ok && v >= 0 && v < bi.num_types;
    if (!ok) issues.push_back("support entry " + std::to_string(s) + " is not a valid type tuple");
    if (!seen.insert(t).second) issues.push_back("support entry " + std::to_string(s) + " repeats a tuple");
    if (!(bi.prob[s] > 0.0)) issues.push_back("support probabilities must be positive");
    total += bi.prob[s];
  }
  if (std::fabs(total - 1.0) > 1e-9) issues.push_back("support probabilities sum to " + std::to_string(total));
  if (issues.empty()) bi.reward.bind(bi.n(), bi.omega.q, bi.omega.outcomes);
  return issues;
}

bool BayesContext::is_inducible(int i, int type, int a) const { return pay[i][type][a].has_value(); }

BayesContext make_context(const BayesianInstance& bi) {
  BayesContext ctx;
  ctx.bi = &bi;
  const int n = bi.n(), P = bi.num_profiles(), K = bi.num_types;
  for (int c = 0; c < P; ++c) ctx.tuples.push_back(bi.decode(c));
  ctx.supp_index.assign(P, -1);
  for (size_t s = 0; s < bi.support.size(); ++s) {
    const int code = bi.encode(bi.support[s]);
    ctx.supp_code.push_back(code);
    ctx.supp_index[code] = static_cast<int>(s);
  }
  ctx.in_phi.assign(n, std::vector<bool>(P, false));
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < P; ++c)
      for (int sc : ctx.supp_code) {
        bool same = true;
        for (int j = 0; j < n; ++j)
          if (j != i && ctx.tuples[c][j] != ctx.tuples[sc][j]) same = false;
        if (same) ctx.in_phi[i][c] = true;
      }
  ctx.inducible.assign(n, std::vector<std::vector<int>>(K));
  ctx.pay.assign(n, std::vector<std::vector<std::optional<PaymentSolution>>>(K));
  double top = 0.0;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < K; ++k) {
      ActionMenu menu;
      for (const auto& act : bi.per_type[i][k].actions) {
        menu.dists.push_back(act.dist);
        menu.costs.push_back(act.cost);
      }
      menu.null_action = bi.per_type[i][k].null_action;
      for (int a = 0; a < bi.l(); ++a) {
        auto sol = min_payment(menu, a);
        if (sol) {
          sol->agent = i;
          ctx.inducible[i][k].push_back(a);
          for (double p : sol->payment_row) top = std::max(top, p);
        }
        ctx.pay[i][k].push_back(std::move(sol));
      }
    }
  ctx.tau = 2.0 * top;
  for (const auto& t : bi.support) ctx.supp_instance.push_back(bi.type_instance(t));
  return ctx;
}

void BayesSolution::init(const BayesianInstance& bi) {
  n = bi.n();
  L = bi.l();
  m = bi.m();
  P = bi.num_profiles();
  xi.assign(static_cast<size_t>(n) * P * L, 0.0);
  y.assign(static_cast<size_t>(n) * P * L * m, 0.0);
  t.assign(bi.support.size(), {});
}

namespace {

const std::vector<double>& dist_of(const BayesianInstance& bi, int i, int type, int a) {
  return bi.per_type[i][type].actions[a].dist;
}

double cost_of(const BayesianInstance& bi, int i, int type, int a) { return bi.per_type[i][type].actions[a].cost; }

int null_of(const BayesianInstance& bi, int i) { return bi.per_type[i][0].null_action; }

int replace_type(const BayesContext& ctx, int code, int i, int type) {
  auto t = ctx.tuples[code];
  t[i] = type;
  return ctx.bi->encode(t);
}

bool same_others(const BayesContext& ctx, int a, int b, int i) {
  for (int j = 0; j < ctx.bi->n(); ++j)
    if (j != i && ctx.tuples[a][j] != ctx.tuples[b][j]) return false;
  return true;
}

double support_reward(const BayesContext& ctx, int s, const std::vector<int>& profile) {
  return expected_reward_exact(ctx.supp_instance[s], profile);
}

// Expected payment F . y of agent i's row at (code, a) under type `type`.
double paid(const BayesContext& ctx, const BayesSolution& sol, int i, int code, int a, int type_for_dist,
            int a_dist) {
  const auto& F = dist_of(*ctx.bi, i, type_for_dist, a_dist);
  double s = 0.0;
  for (int w = 0; w < sol.m; ++w) s += F[w] * sol.Y(i, code, a, w);
  return s;
}

// Monotone coupling of per-agent marginals with common total mass.
std::vector<std::pair<std::vector<int>, double>> couple(const std::vector<std::vector<int>>& acts,
                                                        std::vector<std::vector<double>> mass) {
  const size_t n = acts.size();
  std::vector<std::pair<std::vector<int>, double>> out;
  std::vector<size_t> ptr(n, 0);
  std::vector<int> profile(n);
  while (true) {
    bool done = false;
    for (size_t i = 0; i < n; ++i) {
      while (ptr[i] < mass[i].size() && mass[i][ptr[i]] <= 1e-15) ++ptr[i];
      if (ptr[i] == mass[i].size()) done = true;
    }
    if (done) break;
    double take = kInf;
    for (size_t i = 0; i < n; ++i) take = std::min(take, mass[i][ptr[i]]);
    for (size_t i = 0; i < n; ++i) {
      profile[i] = acts[i][ptr[i]];
      mass[i][ptr[i]] -= take;
    }
    out.push_back({profile, take});
  }
  return out;
}

struct PrimalMap {
  std::vector<int> xi, y;
  std::vector<std::pair<int, std::vector<int>>> t_keys;
  int t_start = 0;
};

LinearProgram build_primal(const BayesContext& ctx, const std::vector<std::pair<int, std::vector<int>>>& t_keys,
                           bool equality, PrimalMap& pm) {
  const BayesianInstance& bi = *ctx.bi;
  const int n = bi.n(), P = bi.num_profiles(), K = bi.num_types, L = bi.l(), m = bi.m();
  const int S = static_cast<int>(ctx.supp_code.size());
  LinearProgram lp;
  lp.sense = Sense::kMax;
  pm.xi.assign(static_cast<size_t>(n) * P * L, -1);
  pm.y.assign(static_cast<size_t>(n) * P * L * m, -1);
  auto xi_at = [&](int i, int c, int a) -> int { return pm.xi[(static_cast<size_t>(i) * P + c) * L + a]; };
  auto y_at = [&](int i, int c, int a, int w) -> int {
    return pm.y[((static_cast<size_t>(i) * P + c) * L + a) * m + w];
  };
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < P; ++c) {
      if (!ctx.in_phi[i][c]) continue;
      const int ti = ctx.tuples[c][i];
      const int s = ctx.supp_index[c];
      for (int a : ctx.inducible[i][ti]) {
        pm.xi[(static_cast<size_t>(i) * P + c) * L + a] = lp.add_var(0.0);
        const auto& F = dist_of(bi, i, ti, a);
        for (int w = 0; w < m; ++w) {
          const double obj = s >= 0 ? -bi.prob[s] * F[w] : 0.0;
          pm.y[((static_cast<size_t>(i) * P + c) * L + a) * m + w] = lp.add_var(obj);
        }
      }
    }
  std::vector<int> g(static_cast<size_t>(n) * S * K * L, -1);
  auto g_at = [&](int i, int s, int k, int a) -> int& { return g[((static_cast<size_t>(i) * S + s) * K + k) * L + a]; };
  for (int i = 0; i < n; ++i)
    for (int s = 0; s < S; ++s)
      for (int k = 0; k < K; ++k)
        for (int a : ctx.inducible[i][k]) g_at(i, s, k, a) = lp.add_var(0.0);
  pm.t_keys = t_keys;
  pm.t_start = lp.num_vars();
  for (const auto& [s, profile] : t_keys) lp.add_var(bi.prob[s] * support_reward(ctx, s, profile));
  const int nv = lp.num_vars();

  for (int i = 0; i < n; ++i)
    for (int s = 0; s < S; ++s) {
      const int code = ctx.supp_code[s];
      const int ti = ctx.tuples[code][i];
      for (int k = 0; k < K; ++k) {
        std::vector<double> row(nv, 0.0);
        for (int a : ctx.inducible[i][ti]) {
          const auto& F = dist_of(bi, i, ti, a);
          for (int w = 0; w < m; ++w) row[y_at(i, code, a, w)] += F[w];
          row[xi_at(i, code, a)] -= cost_of(bi, i, ti, a);
        }
        for (int a : ctx.inducible[i][k]) row[g_at(i, s, k, a)] -= 1.0;
        lp.add_row(row, Rel::kGe, 0.0);
        const int psi = replace_type(ctx, code, i, k);
        for (int a : ctx.inducible[i][k])
          for (int b : ctx.inducible[i][ti]) {
            std::vector<double> r(nv, 0.0);
            r[g_at(i, s, k, a)] = 1.0;
            const auto& F = dist_of(bi, i, ti, b);
            for (int w = 0; w < m; ++w) r[y_at(i, psi, a, w)] -= F[w];
            r[xi_at(i, psi, a)] += cost_of(bi, i, ti, b);
            lp.add_row(r, Rel::kGe, 0.0);
          }
      }
    }
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < P; ++c) {
      if (!ctx.in_phi[i][c]) continue;
      std::vector<double> row(nv, 0.0);
      for (int a : ctx.inducible[i][ctx.tuples[c][i]]) row[xi_at(i, c, a)] = 1.0;
      lp.add_row(row, Rel::kEq, 1.0);
    }
  for (int i = 0; i < n; ++i)
    for (int s = 0; s < S; ++s) {
      const int code = ctx.supp_code[s];
      for (int a : ctx.inducible[i][ctx.tuples[code][i]]) {
        std::vector<double> row(nv, 0.0);
        for (size_t k = 0; k < t_keys.size(); ++k)
          if (t_keys[k].first == s && t_keys[k].second[i] == a) row[pm.t_start + k] = 1.0;
        row[xi_at(i, code, a)] = -1.0;
        lp.add_row(row, equality ? Rel::kEq : Rel::kLe, 0.0);
      }
    }
  return lp;
}

Lp3Result solve_primal(const BayesContext& ctx, const std::vector<std::pair<int, std::vector<int>>>& keys,
                       bool equality) {
  PrimalMap pm;
  const auto lp = build_primal(ctx, keys, equality, pm);
  const auto res = solve_lp(lp);
  if (res.status != LpStatus::kOptimal)
    throw Error(ErrorCode::kNumerical, "menu LP did not reach an optimum: " + res.message);
  Lp3Result out;
  out.value = res.value;
  out.sol.init(*ctx.bi);
  for (size_t k = 0; k < pm.xi.size(); ++k)
    if (pm.xi[k] >= 0) out.sol.xi[k] = std::max(0.0, res.x[pm.xi[k]]);
  for (size_t k = 0; k < pm.y.size(); ++k)
    if (pm.y[k] >= 0) {
      const double v = res.x[pm.y[k]];
      out.sol.y[k] = v > 1e-12 ? v : 0.0;
    }
  for (size_t k = 0; k < keys.size(); ++k) {
    const double v = res.x[pm.t_start + k];
    if (v > 1e-12) out.sol.t[keys[k].first][keys[k].second] += v;
  }
  return out;
}

}  // namespace

double lp_objective(const BayesContext& ctx, const BayesSolution& sol) {
  const BayesianInstance& bi = *ctx.bi;
  double val = 0.0;
  for (size_t s = 0; s < ctx.supp_code.size(); ++s) {
    const int code = ctx.supp_code[s];
    const double lam = bi.prob[s];
    for (const auto& [profile, tv] : sol.t[s]) val += lam * tv * support_reward(ctx, static_cast<int>(s), profile);
    for (int i = 0; i < bi.n(); ++i) {
      const int ti = ctx.tuples[code][i];
      for (int a : ctx.inducible[i][ti]) val -= lam * paid(ctx, sol, i, code, a, ti, a);
    }
  }
  return val;
}

double lp_violation(const BayesContext& ctx, const BayesSolution& sol, bool equality) {
  const BayesianInstance& bi = *ctx.bi;
  const int n = bi.n(), P = bi.num_profiles(), K = bi.num_types;
  double viol = 0.0;
  for (double v : sol.xi) viol = std::max(viol, -v);
  for (double v : sol.y) viol = std::max(viol, -v);
  for (const auto& ts : sol.t)
    for (const auto& [p, v] : ts) viol = std::max(viol, -v);
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < P; ++c) {
      if (!ctx.in_phi[i][c]) continue;
      double s = 0.0;
      for (int a : ctx.inducible[i][ctx.tuples[c][i]]) s += sol.XI(i, c, a);
      viol = std::max(viol, std::fabs(s - 1.0));
    }
  for (size_t s = 0; s < ctx.supp_code.size(); ++s) {
    const int code = ctx.supp_code[s];
    for (int i = 0; i < n; ++i) {
      const int ti = ctx.tuples[code][i];
      for (int a : ctx.inducible[i][ti]) {
        double marg = 0.0;
        for (const auto& [p, v] : sol.t[s])
          if (p[i] == a) marg += v;
        const double diff = marg - sol.XI(i, code, a);
        viol = std::max(viol, equality ? std::fabs(diff) : diff);
      }
      double truthful = 0.0;
      for (int a : ctx.inducible[i][ti])
        truthful += paid(ctx, sol, i, code, a, ti, a) - cost_of(bi, i, ti, a) * sol.XI(i, code, a);
      for (int k = 0; k < K; ++k) {
        const int psi = replace_type(ctx, code, i, k);
        double dev = 0.0;
        for (int a : ctx.inducible[i][k]) {
          double best = -kInf;
          for (int b : ctx.inducible[i][ti])
            best = std::max(best, paid(ctx, sol, i, psi, a, ti, b) - cost_of(bi, i, ti, b) * sol.XI(i, psi, a));
          dev += best;
        }
        viol = std::max(viol, dev - truthful);
      }
    }
  }
  return viol;
}

std::vector<std::array<int, 3>> irregular_indices(const BayesContext& ctx, const BayesSolution& sol, double tol) {
  std::vector<std::array<int, 3>> out;
  const BayesianInstance& bi = *ctx.bi;
  for (int i = 0; i < bi.n(); ++i)
    for (int c = 0; c < bi.num_profiles(); ++c) {
      if (!ctx.in_phi[i][c]) continue;
      for (int a : ctx.inducible[i][ctx.tuples[c][i]]) {
        double ymax = 0.0;
        for (int w = 0; w < sol.m; ++w) ymax = std::max(ymax, sol.Y(i, c, a, w));
        if (ymax > tol && sol.XI(i, c, a) <= tol) out.push_back({i, c, a});
      }
    }
  return out;
}

Lp3Result solve_lp3_direct(const BayesContext& ctx, bool equality, long cap) {
  std::vector<std::pair<int, std::vector<int>>> keys;
  const int n = ctx.bi->n();
  for (size_t s = 0; s < ctx.supp_code.size(); ++s) {
    const auto& tup = ctx.tuples[ctx.supp_code[s]];
    std::vector<size_t> idx(n, 0);
    std::vector<int> profile(n);
    while (true) {
      for (int i = 0; i < n; ++i) profile[i] = ctx.inducible[i][tup[i]][idx[i]];
      keys.push_back({static_cast<int>(s), profile});
      if (static_cast<long>(keys.size()) > cap)
        throw Error(ErrorCode::kRefusal, "direct menu LP exceeds the profile cap");
      int k = n - 1;
      while (k >= 0 && ++idx[k] == ctx.inducible[k][tup[k]].size()) idx[k--] = 0;
      if (k < 0) break;
    }
  }
  return solve_primal(ctx, keys, equality);
}

Lp3Result solve_restricted(const BayesContext& ctx, const std::vector<std::pair<int, std::vector<int>>>& t_keys) {
  auto keys = t_keys;
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  return solve_primal(ctx, keys, false);
}

BayesSolution relaxed_to_equality(const BayesContext& ctx, const BayesSolution& sol) {
  BayesSolution out = sol;
  const int n = ctx.bi->n();
  for (size_t s = 0; s < ctx.supp_code.size(); ++s) {
    const int code = ctx.supp_code[s];
    double tsum = 0.0;
    for (const auto& [p, v] : sol.t[s]) tsum += v;
    const double gap = 1.0 - tsum;
    if (gap <= 1e-12) continue;
    std::vector<std::vector<int>> acts(n);
    std::vector<std::vector<double>> rest(n);
    for (int i = 0; i < n; ++i) {
      acts[i] = ctx.inducible[i][ctx.tuples[code][i]];
      double total = 0.0;
      for (int a : acts[i]) {
        double marg = 0.0;
        for (const auto& [p, v] : sol.t[s])
          if (p[i] == a) marg += v;
        rest[i].push_back(std::max(0.0, sol.XI(i, code, a) - marg));
        total += rest[i].back();
      }
      if (total <= 0.0) {
        acts[i] = {null_of(*ctx.bi, i)};
        rest[i] = {gap};
      } else {
        for (double& v : rest[i]) v *= gap / total;
      }
    }
    for (const auto& [profile, mass] : couple(acts, rest)) out.t[s][profile] += mass;
  }
  return out;
}

BayesSolution regularize(const BayesContext& ctx, const BayesSolution& sol, double eps) {
  const auto W = irregular_indices(ctx, sol);
  if (W.empty()) return sol;
  const BayesianInstance& bi = *ctx.bi;
  const int n = bi.n(), P = bi.num_profiles();
  BayesSolution out = sol;
  for (double& v : out.xi) v *= 1.0 - eps;
  for (double& v : out.y) v *= 1.0 - eps;
  for (auto& ts : out.t)
    for (auto& [p, v] : ts) v *= 1.0 - eps;
  const double share = eps / static_cast<double>(W.size());
  for (const auto& [wi, wc, wa] : W) {
    const auto& row = ctx.pay[wi][ctx.tuples[wc][wi]][wa]->payment_row;
    // Recommended action of agent wi per reported code sharing wc's others.
    std::vector<int> rec(P, -1);
    for (int c = 0; c < P; ++c) {
      if (!ctx.in_phi[wi][c] || !same_others(ctx, c, wc, wi)) continue;
      if (c == wc) {
        rec[c] = wa;
        continue;
      }
      const int k = ctx.tuples[c][wi];
      double best = -kInf;
      for (int b : ctx.inducible[wi][k]) {
        const auto& F = dist_of(bi, wi, k, b);
        double u = -cost_of(bi, wi, k, b);
        for (int w = 0; w < bi.m(); ++w) u += F[w] * row[w];
        if (u > best + 1e-12) {
          best = u;
          rec[c] = b;
        }
      }
    }
    for (int i = 0; i < n; ++i)
      for (int c = 0; c < P; ++c) {
        if (!ctx.in_phi[i][c]) continue;
        if (i == wi && rec[c] >= 0) {
          out.XI(i, c, rec[c]) += share;
          for (int w = 0; w < bi.m(); ++w) out.Y(i, c, rec[c], w) += share * row[w];
        } else {
          out.XI(i, c, null_of(bi, i)) += share;
        }
      }
    for (size_t s = 0; s < ctx.supp_code.size(); ++s) {
      const int code = ctx.supp_code[s];
      std::vector<int> profile(n);
      for (int i = 0; i < n; ++i) profile[i] = null_of(bi, i);
      if (rec[code] >= 0) profile[wi] = rec[code];
      out.t[s][profile] += share;
    }
  }
  return out;
}

RandomizedMenu menu_from_solution(const BayesContext& ctx, const BayesSolution& sol) {
  const BayesianInstance& bi = *ctx.bi;
  const int n = bi.n(), P = bi.num_profiles(), m = bi.m();
  RandomizedMenu menu;
  menu.entries.resize(P);
  auto rows_for = [&](int code, const std::vector<int>& profile) {
    std::vector<std::vector<double>> rows(n, std::vector<double>(m, 0.0));
    for (int i = 0; i < n; ++i) {
      if (!ctx.in_phi[i][code]) continue;
      const double x = sol.XI(i, code, profile[i]);
      if (x <= 0.0) continue;
      for (int w = 0; w < m; ++w) rows[i][w] = sol.Y(i, code, profile[i], w) / x;
    }
    return rows;
  };
  for (int c = 0; c < P; ++c) {
    const int s = ctx.supp_index[c];
    if (s >= 0) {
      for (const auto& [profile, v] : sol.t[s])
        if (v > 0.0) menu.entries[c].push_back({v, profile, rows_for(c, profile)});
      continue;
    }
    bool used = false;
    std::vector<std::vector<int>> acts(n);
    std::vector<std::vector<double>> mass(n);
    for (int i = 0; i < n; ++i) {
      if (ctx.in_phi[i][c]) {
        used = true;
        double total = 0.0;
        for (int a : ctx.inducible[i][ctx.tuples[c][i]]) {
          acts[i].push_back(a);
          mass[i].push_back(sol.XI(i, c, a));
          total += sol.XI(i, c, a);
        }
        for (double& v : mass[i]) v /= total;
      } else {
        acts[i] = {null_of(bi, i)};
        mass[i] = {1.0};
      }
    }
    if (!used) continue;
    for (const auto& [profile, v] : couple(acts, mass)) menu.entries[c].push_back({v, profile, rows_for(c, profile)});
  }
  return menu;
}

double menu_value(const BayesContext& ctx, const RandomizedMenu& menu) {
  const BayesianInstance& bi = *ctx.bi;
  double val = 0.0;
  for (size_t s = 0; s < ctx.supp_code.size(); ++s) {
    const int code = ctx.supp_code[s];
    for (const auto& e : menu.entries[code]) {
      double u = support_reward(ctx, static_cast<int>(s), e.profile);
      for (int i = 0; i < bi.n(); ++i) {
        const auto& F = dist_of(bi, i, ctx.tuples[code][i], e.profile[i]);
        for (int w = 0; w < bi.m(); ++w) u -= F[w] * e.payments[i][w];
      }
      val += bi.prob[s] * e.prob * u;
    }
  }
  return val;
}

json menu_to_json(const BayesContext& ctx, const RandomizedMenu& menu) {
  json out = json::array();
  for (size_t c = 0; c < menu.entries.size(); ++c) {
    if (menu.entries[c].empty()) continue;
    json contracts = json::array();
    for (const auto& e : menu.entries[c])
      contracts.push_back({{"prob", e.prob}, {"recommendations", e.profile}, {"payments", e.payments}});
    out.push_back({{"types", ctx.tuples[c]},
                   {"in_support", ctx.supp_index[c] >= 0},
                   {"contracts", contracts}});
  }
  return out;
}

RandomizedMenu menu_from_json(const BayesianInstance& bi, const json& j) {
  RandomizedMenu menu;
  menu.entries.resize(bi.num_profiles());
  for (const auto& e : j) {
    const int code = bi.encode(e.at("types").get<std::vector<int>>());
    for (const auto& c : e.at("contracts"))
      menu.entries[code].push_back({c.at("prob").get<double>(), c.at("recommendations").get<std::vector<int>>(),
                                    c.at("payments").get<std::vector<std::vector<double>>>()});
  }
  return menu;
}

DsicReport check_dsic(const BayesContext& ctx, const RandomizedMenu& menu, double tol) {
  const BayesianInstance& bi = *ctx.bi;
  DsicReport rep;
  auto utility = [&](int i, int type, const MenuEntry& e, int a) {
    const auto& F = dist_of(bi, i, type, a);
    double u = -cost_of(bi, i, type, a);
    for (int w = 0; w < bi.m(); ++w) u += F[w] * e.payments[i][w];
    return u;
  };
  for (int i = 0; i < bi.n(); ++i)
    for (int code : ctx.supp_code) {
      const int ti = ctx.tuples[code][i];
      double truthful = 0.0;
      for (const auto& e : menu.entries[code]) truthful += e.prob * utility(i, ti, e, e.profile[i]);
      for (int k = 0; k < bi.num_types; ++k) {
        const int psi = replace_type(ctx, code, i, k);
        double dev = 0.0;
        for (const auto& e : menu.entries[psi]) {
          double best = -kInf;
          for (int b = 0; b < bi.l(); ++b) best = std::max(best, utility(i, ti, e, b));
          dev += e.prob * best;
        }
        const double margin = truthful - dev;
        rep.margins.push_back({i, code, k, margin});
        rep.worst = std::min(rep.worst, margin);
        if (margin < -tol) rep.pass = false;
      }
    }
  return rep;
}

std::vector<int> approx_oracle(const BayesContext& ctx, int s, const std::vector<std::vector<double>>& w, double eps,
                               OracleKind kind, uint64_t seed) {
  const Instance& inst = ctx.supp_instance[s];
  const auto& tup = ctx.tuples[ctx.supp_code[s]];
  std::vector<std::vector<int>> acts(inst.n());
  std::vector<std::vector<double>> weights(inst.n());
  for (int i = 0; i < inst.n(); ++i) {
    acts[i] = ctx.inducible[i][tup[i]];
    for (int a : acts[i]) weights[i].push_back(w[i][a]);
  }
  const auto pp = build_weighted_problem(inst, acts, weights, ctx.bi->prob[s]);
  if (kind == OracleKind::kIrFosd) {
    IrFosdOptions opt;
    opt.verify_fosd = false;
    opt.verify_reward = false;
    return solve_ir_fosd(pp, opt).profile;
  }
  DrOptions opt;
  opt.eps = eps;
  opt.seed = seed;
  opt.verify_reward = false;
  return solve_dr(pp, opt).sol.profile;
}

DualLayout make_dual_layout(const BayesContext& ctx) {
  const BayesianInstance& bi = *ctx.bi;
  const int n = bi.n(), P = bi.num_profiles(), K = bi.num_types, L = bi.l(), m = bi.m();
  const int S = static_cast<int>(ctx.supp_code.size());
  DualLayout lay;
  lay.x_index.assign(static_cast<size_t>(n) * P, -1);
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < P; ++c)
      if (ctx.in_phi[i][c]) {
        lay.x_index[static_cast<size_t>(i) * P + c] = lay.dim++;
        lay.names.push_back("x[" + std::to_string(i) + "," + std::to_string(c) + "]");
      }
  lay.y_index.assign(n, std::vector<std::vector<int>>(S, std::vector<int>(L, -1)));
  for (int i = 0; i < n; ++i)
    for (int s = 0; s < S; ++s)
      for (int a : ctx.inducible[i][ctx.tuples[ctx.supp_code[s]][i]]) {
        lay.y_index[i][s][a] = lay.dim++;
        lay.names.push_back("y[" + std::to_string(i) + "," + std::to_string(s) + "," + std::to_string(a) + "]");
      }
  std::vector<int> z(static_cast<size_t>(n) * S * K, -1);
  auto z_at = [&](int i, int s, int k) -> int& { return z[(static_cast<size_t>(i) * S + s) * K + k]; };
  for (int i = 0; i < n; ++i)
    for (int s = 0; s < S; ++s)
      for (int k = 0; k < K; ++k) {
        z_at(i, s, k) = lay.dim++;
        lay.names.push_back("z[" + std::to_string(i) + "," + std::to_string(s) + "," + std::to_string(k) + "]");
      }
  std::vector<int> d(static_cast<size_t>(n) * S * K * L * L, -1);
  auto d_at = [&](int i, int s, int k, int a, int b) -> int& {
    return d[(((static_cast<size_t>(i) * S + s) * K + k) * L + a) * L + b];
  };
  for (int i = 0; i < n; ++i)
    for (int s = 0; s < S; ++s) {
      const int ti = ctx.tuples[ctx.supp_code[s]][i];
      for (int k = 0; k < K; ++k)
        for (int a : ctx.inducible[i][k])
          for (int b : ctx.inducible[i][ti]) {
            d_at(i, s, k, a, b) = lay.dim++;
            lay.names.push_back("d[" + std::to_string(i) + "," + std::to_string(s) + "," + std::to_string(k) + "," +
                                std::to_string(a) + "," + std::to_string(b) + "]");
          }
    }
  const int dim = lay.dim;
  auto add = [&](std::vector<double> a, double b, std::string tag) { lay.explicit_cuts.push_back({std::move(a), b, std::move(tag)}); };
  // Columns of xi and y.
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < P; ++c) {
      if (!ctx.in_phi[i][c]) continue;
      const int phi_i = ctx.tuples[c][i];
      const int sc = ctx.supp_index[c];
      for (int a : ctx.inducible[i][phi_i]) {
        // Column of xi, as sum >= 0, negated.
        std::vector<double> col(dim, 0.0);
        col[lay.x_index[static_cast<size_t>(i) * P + c]] += 1.0;
        if (sc >= 0) {
          col[lay.y_index[i][sc][a]] -= 1.0;
          for (int k = 0; k < K; ++k) col[z_at(i, sc, k)] += cost_of(bi, i, phi_i, a);
        }
        for (int s = 0; s < S; ++s) {
          if (!same_others(ctx, ctx.supp_code[s], c, i)) continue;
          const int ti = ctx.tuples[ctx.supp_code[s]][i];
          for (int b : ctx.inducible[i][ti]) col[d_at(i, s, phi_i, a, b)] -= cost_of(bi, i, ti, b);
        }
        for (double& v : col) v = -v;
        add(col, 0.0, "xi");
        for (int w = 0; w < m; ++w) {
          std::vector<double> cy(dim, 0.0);
          double rhs = 0.0;
          if (sc >= 0) {
            const double f = dist_of(bi, i, phi_i, a)[w];
            for (int k = 0; k < K; ++k) cy[z_at(i, sc, k)] -= f;
            rhs = -bi.prob[sc] * f;
          }
          for (int s = 0; s < S; ++s) {
            if (!same_others(ctx, ctx.supp_code[s], c, i)) continue;
            const int ti = ctx.tuples[ctx.supp_code[s]][i];
            for (int b : ctx.inducible[i][ti]) cy[d_at(i, s, phi_i, a, b)] += dist_of(bi, i, ti, b)[w];
          }
          for (double& v : cy) v = -v;
          add(cy, -rhs, "y");
        }
      }
    }
  // Columns of gamma.
  for (int i = 0; i < n; ++i)
    for (int s = 0; s < S; ++s) {
      const int ti = ctx.tuples[ctx.supp_code[s]][i];
      for (int k = 0; k < K; ++k)
        for (int a : ctx.inducible[i][k]) {
          std::vector<double> col(dim, 0.0);
          col[z_at(i, s, k)] = -1.0;
          for (int b : ctx.inducible[i][ti]) col[d_at(i, s, k, a, b)] = 1.0;
          add(col, 0.0, "gamma");
        }
    }
  // Sign constraints of y, z and d.
  const int first_sign = static_cast<int>(std::count_if(lay.x_index.begin(), lay.x_index.end(), [](int v) { return v >= 0; }));
  for (int v = first_sign; v < dim; ++v) {
    std::vector<double> a(dim, 0.0);
    a[v] = -1.0;
    add(a, 0.0, "sign");
  }
  return lay;
}

SeparationResult separation_for_dual(const BayesContext& ctx, const DualLayout& layout, const std::vector<double>& point,
                                     double eta, double eps, OracleKind kind, uint64_t seed, long* oracle_calls) {
  const BayesianInstance& bi = *ctx.bi;
  SeparationResult out;
  const Cut* worst = nullptr;
  double wv = 1e-12;
  for (const auto& cut : layout.explicit_cuts) {
    double s = -cut.b, norm = 0.0;
    for (size_t j = 0; j < cut.a.size(); ++j) {
      if (cut.a[j] == 0.0) continue;
      s += cut.a[j] * point[j];
      norm += cut.a[j] * cut.a[j];
    }
    s /= std::sqrt(std::max(norm, 1e-300));
    if (s > wv) {
      wv = s;
      worst = &cut;
    }
  }
  if (worst) {
    out.feasible = false;
    out.cut = *worst;
    return out;
  }
  double sum_x = 0.0;
  std::vector<double> obj(layout.dim, 0.0);
  for (int v : layout.x_index)
    if (v >= 0) {
      sum_x += point[v];
      obj[v] = 1.0;
    }
  if (sum_x > eta + 1e-12) {
    out.feasible = false;
    out.cut = {obj, eta, "objective"};
    return out;
  }
  const int n = bi.n(), L = bi.l();
  for (size_t s = 0; s < ctx.supp_code.size(); ++s) {
    std::vector<std::vector<double>> w(n, std::vector<double>(L, 2.0));
    for (int i = 0; i < n; ++i)
      for (int a = 0; a < L; ++a) {
        const int v = layout.y_index[i][s][a];
        if (v >= 0) w[i][a] = std::min(point[v], 2.0);
      }
    if (oracle_calls) ++*oracle_calls;
    const auto profile = approx_oracle(ctx, static_cast<int>(s), w, eps, kind,
                                       sub_seed(seed, oracle_calls ? static_cast<uint64_t>(*oracle_calls) : s));
    const double target = bi.prob[s] * support_reward(ctx, static_cast<int>(s), profile);
    double covered = 0.0;
    for (int i = 0; i < n; ++i) covered += point[layout.y_index[i][s][profile[i]]];
    if (target - covered > 1e-12) {
      std::vector<double> a(layout.dim, 0.0);
      std::ostringstream tag;
      tag << "t:" << s << ":";
      for (int i = 0; i < n; ++i) {
        a[layout.y_index[i][s][profile[i]]] = -1.0;
        tag << (i ? "," : "") << profile[i];
      }
      out.feasible = false;
      out.cut = {a, -target, tag.str()};
      return out;
    }
  }
  return out;
}

namespace {

std::optional<std::pair<int, std::vector<int>>> parse_t_tag(const std::string& tag) {
  if (tag.rfind("t:", 0) != 0) return std::nullopt;
  const size_t colon = tag.find(':', 2);
  std::pair<int, std::vector<int>> key;
  key.first = std::stoi(tag.substr(2, colon - 2));
  std::stringstream ss(tag.substr(colon + 1));
  std::string item;
  while (std::getline(ss, item, ',')) key.second.push_back(std::stoi(item));
  return key;
}

void verify_preconditions(const BayesContext& ctx, OracleKind kind) {
  const BayesianInstance& bi = *ctx.bi;
  const Instance& first = ctx.supp_instance[0];
  PropertyOptions po;
  const Property prop = kind == OracleKind::kIrFosd ? Property::kIrSupermodular : Property::kDrSubmodular;
  PropertyVerdict pv;
  try {
    pv = check_property(first.reward, first, prop, po);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kRefusal) throw;
    po.exhaustive = false;
    pv = check_property(first.reward, first, prop, po);
  }
  if (!pv.pass)
    throw Error(ErrorCode::kRefusal, std::string("reward fails the ") + to_string(prop) + " check");
  if (kind != OracleKind::kIrFosd) return;
  for (int k = 0; k < bi.num_types; ++k) {
    Instance inst = first;
    for (int i = 0; i < bi.n(); ++i) inst.agents[i] = bi.per_type[i][k];
    std::vector<std::vector<int>> acts(bi.n());
    for (int i = 0; i < bi.n(); ++i) acts[i] = ctx.inducible[i][k];
    if (!check_fosd(inst, &acts).pass)
      throw Error(ErrorCode::kRefusal, "FOSD fails for type " + std::to_string(k));
  }
}

}  // namespace

BayesRun bayes_solve(const BayesianInstance& bi, const BayesOptions& opt) {
  if (!(opt.rho > 0.0)) throw Error(ErrorCode::kUsage, "rho must be positive");
  const BayesContext ctx = make_context(bi);
  if (opt.verify) verify_preconditions(ctx, opt.kind);
  const DualLayout layout = make_dual_layout(ctx);
  const int S = static_cast<int>(ctx.supp_code.size());
  const double beta = opt.rho / 4.0;
  const double eps = opt.rho / (4.0 * S);
  const double tol = beta / 4.0;
  const double radius = 1.0 + S * bi.n() * bi.l() * (2.0 + ctx.tau);

  BayesRun run;
  double lo = 0.0, hi = std::max(1.0, bi.reward_bound);
  std::vector<std::pair<int, std::vector<int>>> keys;
  while (hi - lo > beta) {
    const double eta = 0.5 * (lo + hi);
    SeparationOracle oracle = [&](const std::vector<double>& point) -> std::optional<Cut> {
      auto r = separation_for_dual(ctx, layout, point, eta, eps, opt.kind, opt.seed, &run.oracle_calls);
      if (r.feasible) return std::nullopt;
      return r.cut;
    };
    const auto res = ellipsoid_feasibility(layout.dim, radius, oracle, 0, tol);
    run.ellipsoid_iterations += res.iterations;
    ++run.binary_steps;
    if (res.status == EllipsoidStatus::kPoint) {
      hi = eta;
    } else {
      lo = eta;
      keys.clear();
      for (const auto& cut : res.history)
        if (auto key = parse_t_tag(cut.tag)) keys.push_back(*key);
    }
  }
  run.eta_low = lo;
  run.eta_high = hi;
  const auto lp8 = solve_restricted(ctx, keys);
  run.cut_count = keys.size();
  run.lp8_value = lp8.value;
  const auto full = relaxed_to_equality(ctx, lp8.sol);
  const double reg_eps = opt.rho / (2.0 * (bi.n() * ctx.tau + 1.0));
  run.solution = regularize(ctx, full, reg_eps);
  run.menu = menu_from_solution(ctx, run.solution);
  run.value = menu_value(ctx, run.menu);
  run.dsic = check_dsic(ctx, run.menu, 1e-6);
  return run;
}

BayesianInstance single_type(const Instance& inst) {
  BayesianInstance bi;
  bi.num_types = 1;
  bi.omega = inst.omega;
  bi.reward = inst.reward;
  bi.reward_bound = inst.reward_bound;
  for (const auto& ag : inst.agents) bi.per_type.push_back({ag});
  bi.support.push_back(std::vector<int>(inst.n(), 0));
  bi.prob.push_back(1.0);
  return bi;
}

}  // namespace pma
