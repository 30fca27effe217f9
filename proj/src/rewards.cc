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

#include "rewards.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "error.hpp"
#include "lp.hpp"
#include "model.hpp"
#include "rng.hpp"

namespace pma {

using nlohmann::json;

const char* to_string(RewardFamily f) {
  switch (f) {
    case RewardFamily::kLinear: return "linear";
    case RewardFamily::kBudgetAdditive: return "budget_additive";
    case RewardFamily::kCoverageMax: return "coverage_max";
    case RewardFamily::kExpSum: return "exp_sum";
    case RewardFamily::kLabelCoverSmooth: return "label_cover_smooth";
    case RewardFamily::kCustomTable: return "custom_table";
  }
  return "?";
}

std::optional<RewardFamily> family_from_string(const std::string& s) {
  for (auto f : {RewardFamily::kLinear, RewardFamily::kBudgetAdditive, RewardFamily::kCoverageMax,
                 RewardFamily::kExpSum, RewardFamily::kLabelCoverSmooth, RewardFamily::kCustomTable}) {
    if (s == to_string(f)) return f;
  }
  return std::nullopt;
}

const char* to_string(Property p) {
  switch (p) {
    case Property::kIncreasing: return "increasing";
    case Property::kDrSubmodular: return "dr_submodular";
    case Property::kIrSupermodular: return "ir_supermodular";
  }
  return "?";
}

std::optional<Property> property_from_string(const std::string& s) {
  if (s == "increasing") return Property::kIncreasing;
  if (s == "dr" || s == "dr_submodular") return Property::kDrSubmodular;
  if (s == "ir" || s == "ir_supermodular") return Property::kIrSupermodular;
  return std::nullopt;
}

RewardSpec reward_from_json(const json& j) {
  if (!j.is_object() || !j.contains("family") || !j["family"].is_string())
    throw Error(ErrorCode::kValidation, "reward must be an object with a string \"family\"");
  RewardSpec spec;
  auto fam = family_from_string(j["family"].get<std::string>());
  if (!fam) throw Error(ErrorCode::kValidation, "unknown reward family " + j["family"].dump());
  spec.family = *fam;
  if (j.contains("params")) spec.params = j["params"];
  if (j.contains("declared_tags")) spec.declared_tags = j["declared_tags"].get<std::vector<std::string>>();
  return spec;
}

json RewardSpec::to_json() const {
  json j{{"family", pma::to_string(family)}, {"params", params}};
  if (!declared_tags.empty()) j["declared_tags"] = declared_tags;
  return j;
}

namespace {

double param(const json& p, const char* key, double fallback, bool required = false) {
  if (!p.contains(key)) {
    if (required) throw Error(ErrorCode::kValidation, std::string("reward parameter \"") + key + "\" missing");
    return fallback;
  }
  return parse_number(p[key]);
}

std::vector<double> weights(const json& p, int n, int q) {
  if (!p.contains("w")) return std::vector<double>(static_cast<size_t>(n) * q, 1.0);
  std::vector<double> w;
  for (const auto& v : p["w"]) w.push_back(parse_number(v));
  if (static_cast<int>(w.size()) == q && n > 1) {
    std::vector<double> full;
    for (int i = 0; i < n; ++i) full.insert(full.end(), w.begin(), w.end());
    w = full;
  }
  if (static_cast<int>(w.size()) != n * q)
    throw Error(ErrorCode::kValidation, "reward weight vector must have length q or n*q");
  for (double v : w)
    if (v < 0) throw Error(ErrorCode::kValidation, "reward weights must be nonnegative");
  return w;
}

}  // namespace

void RewardSpec::bind(int n_agents, int dim_q, const std::vector<std::vector<double>>& outcomes) {
  n = n_agents;
  q = dim_q;
  const int len = n * q;
  const json& p = params;
  switch (family) {
    case RewardFamily::kLinear:
      w = weights(p, n, q);
      break;
    case RewardFamily::kBudgetAdditive:
      w = weights(p, n, q);
      budget = param(p, "B", 1.0);
      if (!(budget > 0)) throw Error(ErrorCode::kValidation, "budget B must be positive");
      break;
    case RewardFamily::kCoverageMax: {
      cover.clear();
      if (!p.contains("edges") || !p["edges"].is_array() || p["edges"].empty())
        throw Error(ErrorCode::kValidation, "coverage_max needs a nonempty \"edges\" list");
      std::vector<double> deg(len, 0.0);
      for (const auto& e : p["edges"]) {
        CoverEdge ce{e.at(0).get<int>(), e.at(1).get<int>()};
        if (ce.u < 0 || ce.u >= len || ce.v < 0 || ce.v >= len || ce.u == ce.v)
          throw Error(ErrorCode::kValidation, "coverage_max edge endpoint out of range");
        deg[ce.u] += 1;
        deg[ce.v] += 1;
        cover.push_back(ce);
      }
      if (p.contains("k")) {
        k.clear();
        for (const auto& v : p["k"]) k.push_back(parse_number(v));
        if (static_cast<int>(k.size()) != len) throw Error(ErrorCode::kValidation, "coverage_max k must have length n*q");
      } else {
        k = deg;
      }
      for (const auto& e : cover)
        if (!(k[e.u] > 0 && k[e.v] > 0)) throw Error(ErrorCode::kValidation, "coverage_max divisors must be positive");
      scale = param(p, "scale", 1.0 / static_cast<double>(cover.size()));
      break;
    }
    case RewardFamily::kExpSum:
      kappa = param(p, "kappa", 1.0);
      cap = param(p, "cap", 1.0, true);
      if (!(kappa > 0) || !(cap > 0)) throw Error(ErrorCode::kValidation, "exp_sum needs kappa > 0 and cap > 0");
      break;
    case RewardFamily::kLabelCoverSmooth: {
      labels.clear();
      smooth_m = param(p, "M", 20.0);
      if (!p.contains("edges") || !p["edges"].is_array() || p["edges"].empty())
        throw Error(ErrorCode::kValidation, "label_cover_smooth needs a nonempty \"edges\" list");
      for (const auto& e : p["edges"]) {
        LabelEdge le;
        le.u = e.at("u").get<int>();
        le.v = e.at("v").get<int>();
        le.pi = e.at("pi").get<std::vector<int>>();
        if (le.u < 0 || le.u >= n || le.v < 0 || le.v >= n)
          throw Error(ErrorCode::kValidation, "label_cover_smooth edge agent out of range");
        if (static_cast<int>(le.pi.size()) != q)
          throw Error(ErrorCode::kValidation, "label_cover_smooth constraint must map every label");
        for (int s : le.pi)
          if (s < 0 || s >= q) throw Error(ErrorCode::kValidation, "label_cover_smooth label out of range");
        labels.push_back(le);
      }
      scale = param(p, "scale", 1.0 / static_cast<double>(labels.size()));
      break;
    }
    case RewardFamily::kCustomTable: {
      table.clear();
      const int m = static_cast<int>(outcomes.size());
      if (!p.contains("table") || !p["table"].is_array())
        throw Error(ErrorCode::kValidation, "custom_table needs a \"table\" array");
      const double count = std::pow(static_cast<double>(m), n);
      if (count > 1e6) throw Error(ErrorCode::kValidation, "custom_table exceeds the enumeration cap");
      if (static_cast<double>(p["table"].size()) != count)
        throw Error(ErrorCode::kValidation, "custom_table must list m^n values");
      std::vector<int> idx(n, 0);
      for (size_t t = 0; t < p["table"].size(); ++t) {
        std::vector<double> key;
        for (int i = 0; i < n; ++i) key.insert(key.end(), outcomes[idx[i]].begin(), outcomes[idx[i]].end());
        table[key] = parse_number(p["table"][t]);
        for (int i = n - 1; i >= 0; --i) {
          if (++idx[i] < m) break;
          idx[i] = 0;
        }
      }
      break;
    }
  }
}

double RewardSpec::eval(const double* x) const {
  const int len = n * q;
  switch (family) {
    case RewardFamily::kLinear: {
      double s = 0.0;
      for (int c = 0; c < len; ++c) s += w[c] * x[c];
      return std::clamp(s, 0.0, 1.0);
    }
    case RewardFamily::kBudgetAdditive: {
      double s = 0.0;
      for (int c = 0; c < len; ++c) s += w[c] * x[c];
      return std::min(budget, s) / budget;
    }
    case RewardFamily::kCoverageMax: {
      double s = 0.0;
      for (const auto& e : cover) s += std::max(x[e.u] / k[e.u], x[e.v] / k[e.v]);
      return scale * s;
    }
    case RewardFamily::kExpSum: {
      double s = 0.0;
      for (int c = 0; c < len; ++c) s += x[c];
      return std::expm1(kappa * s) / std::expm1(kappa * cap);
    }
    case RewardFamily::kLabelCoverSmooth: {
      double s = 0.0;
      for (const auto& e : labels)
        for (int sig = 0; sig < q; ++sig)
          s += std::exp(smooth_m * (x[e.v * q + sig] + x[e.u * q + e.pi[sig]] - 2.0));
      return scale * s;
    }
    case RewardFamily::kCustomTable: {
      std::vector<double> key(x, x + len);
      auto it = table.find(key);
      if (it == table.end()) throw Error(ErrorCode::kValidation, "custom_table lookup miss");
      return it->second;
    }
  }
  return 0.0;
}

namespace {

struct Grid {
  std::vector<std::vector<double>> values;  // per stacked coordinate
  std::vector<double> box;
  double size = 1.0;
};

Grid make_grid(const Instance& inst) {
  Grid g;
  const int q = inst.q();
  std::vector<std::vector<double>> per_dim(q);
  for (int d = 0; d < q; ++d) {
    std::set<double> s{0.0};
    for (const auto& o : inst.omega.outcomes) s.insert(o[d]);
    per_dim[d].assign(s.begin(), s.end());
  }
  for (int i = 0; i < inst.n(); ++i)
    for (int d = 0; d < q; ++d) {
      g.values.push_back(per_dim[d]);
      g.box.push_back(per_dim[d].back());
      g.size *= static_cast<double>(per_dim[d].size());
    }
  return g;
}

// Decodes grid point `code` into x.
void grid_point(const Grid& g, long code, std::vector<double>& x) {
  for (int c = static_cast<int>(g.values.size()) - 1; c >= 0; --c) {
    const long r = static_cast<long>(g.values[c].size());
    x[c] = g.values[c][code % r];
    code /= r;
  }
}

bool leq(const std::vector<double>& a, const std::vector<double>& b) {
  for (size_t c = 0; c < a.size(); ++c)
    if (a[c] > b[c]) return false;
  return true;
}

bool sum_in_box(const std::vector<double>& a, const std::vector<double>& b, const std::vector<double>& box) {
  for (size_t c = 0; c < a.size(); ++c)
    if (a[c] + b[c] > box[c] + 1e-12) return false;
  return true;
}

std::vector<double> add(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> s(a.size());
  for (size_t c = 0; c < a.size(); ++c) s[c] = a[c] + b[c];
  return s;
}

// Returns the violation amount (> 0 means violated beyond zero).
double violation(const RewardSpec& spec, Property p, const std::vector<double>& w1,
                 const std::vector<double>& w2, const std::vector<double>& w3) {
  if (p == Property::kIncreasing) return spec.eval(w1) - spec.eval(w2);
  const double lhs = spec.eval(add(w1, w3)) - spec.eval(w1);
  const double rhs = spec.eval(add(w2, w3)) - spec.eval(w2);
  return p == Property::kDrSubmodular ? rhs - lhs : lhs - rhs;
}

}  // namespace

PropertyVerdict check_property(const RewardSpec& spec, const Instance& inst, Property property,
                               const PropertyOptions& opt) {
  PropertyVerdict v;
  v.exhaustive = opt.exhaustive;
  const Grid g = make_grid(inst);
  const size_t len = g.values.size();
  std::vector<double> w1(len), w2(len), w3(len);
  auto record = [&](double viol) {
    if (viol > opt.tol && viol > v.violation) {
      v.pass = false;
      v.violation = viol;
      return true;
    }
    return false;
  };
  if (opt.exhaustive) {
    const double count = property == Property::kIncreasing ? g.size * g.size : g.size * g.size * g.size;
    if (count > static_cast<double>(opt.cap))
      throw Error(ErrorCode::kRefusal, "exhaustive property check exceeds the cap; use sampled mode");
    const long G = static_cast<long>(g.size);
    for (long b = 0; b < G; ++b) {
      grid_point(g, b, w2);
      for (long a = 0; a < G; ++a) {
        grid_point(g, a, w1);
        if (!leq(w1, w2)) continue;
        if (property == Property::kIncreasing) {
          ++v.checked;
          if (record(violation(spec, property, w1, w2, w3))) {
            v.w1 = w1;
            v.w2 = w2;
            v.w3.clear();
          }
          continue;
        }
        for (long c = 0; c < G; ++c) {
          grid_point(g, c, w3);
          if (!sum_in_box(w2, w3, g.box)) continue;
          ++v.checked;
          if (record(violation(spec, property, w1, w2, w3))) {
            v.w1 = w1;
            v.w2 = w2;
            v.w3 = w3;
          }
        }
      }
    }
  } else {
    Rng rng(opt.seed);
    for (long t = 0; t < opt.trials; ++t) {
      for (size_t c = 0; c < len; ++c) {
        const auto& vals = g.values[c];
        const int ia = rng.below_int(static_cast<int>(vals.size()));
        const int ib = ia + rng.below_int(static_cast<int>(vals.size()) - ia);
        w1[c] = vals[ia];
        w2[c] = vals[ib];
        int lim = 0;
        while (lim + 1 < static_cast<int>(vals.size()) && vals[lim + 1] + w2[c] <= g.box[c] + 1e-12) ++lim;
        w3[c] = vals[rng.below_int(lim + 1)];
      }
      ++v.checked;
      if (record(violation(spec, property, w1, w2, w3))) {
        v.w1 = w1;
        v.w2 = w2;
        v.w3 = property == Property::kIncreasing ? std::vector<double>{} : w3;
      }
    }
  }
  if (v.pass) {
    v.message = opt.exhaustive ? "PASS" : "no violation found in " + std::to_string(v.checked) + " trials";
  } else {
    v.message = "FAIL";
  }
  return v;
}

std::vector<int> canonical_order(const Instance& inst, int agent, const std::vector<int>& actions) {
  std::vector<int> order(actions);
  const int nul = inst.agents[agent].null_action;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if ((a == nul) != (b == nul)) return a == nul;
    const double ca = inst.cost(agent, a), cb = inst.cost(agent, b);
    if (ca != cb) return ca < cb;
    return a < b;
  });
  return order;
}

std::vector<int> canonical_order(const Instance& inst, int agent) {
  std::vector<int> all(inst.agents[agent].num_actions());
  std::iota(all.begin(), all.end(), 0);
  return canonical_order(inst, agent, all);
}

namespace {

std::vector<uint32_t> down_masks(const std::vector<std::vector<double>>& outcomes) {
  const int m = static_cast<int>(outcomes.size());
  std::vector<uint32_t> down(m, 0);
  for (int w = 0; w < m; ++w)
    for (int v = 0; v < m; ++v)
      if (leq(outcomes[v], outcomes[w])) down[w] |= 1u << v;
  return down;
}

std::vector<int> chain_for(const Instance& inst, int i, const std::vector<std::vector<int>>* actions) {
  return actions ? canonical_order(inst, i, (*actions)[i]) : canonical_order(inst, i);
}

}  // namespace

bool dominates_on_all_comprehensive(const std::vector<std::vector<double>>& outcomes,
                                    const std::vector<double>& cheap, const std::vector<double>& costly,
                                    std::vector<int>* witness, double tol) {
  const int m = static_cast<int>(outcomes.size());
  if (m > 12) throw Error(ErrorCode::kRefusal, "comprehensive-set enumeration needs m <= 12");
  const auto down = down_masks(outcomes);
  for (uint32_t s = 1; s < (1u << m); ++s) {
    bool closed = true;
    for (int w = 0; w < m && closed; ++w)
      if ((s >> w & 1u) && (down[w] & ~s)) closed = false;
    if (!closed) continue;
    double lo = 0.0, hi = 0.0;
    for (int w = 0; w < m; ++w)
      if (s >> w & 1u) {
        lo += cheap[w];
        hi += costly[w];
      }
    if (hi > lo + tol) {
      if (witness) {
        witness->clear();
        for (int w = 0; w < m; ++w)
          if (s >> w & 1u) witness->push_back(w);
      }
      return false;
    }
  }
  return true;
}

FosdVerdict fosd_bruteforce(const Instance& inst, const std::vector<std::vector<int>>* actions) {
  if (inst.m() > 12) throw Error(ErrorCode::kRefusal, "fosd_bruteforce needs m <= 12");
  FosdVerdict v;
  for (int i = 0; i < inst.n(); ++i) {
    const auto chain = chain_for(inst, i, actions);
    for (size_t k = 0; k + 1 < chain.size(); ++k) {
      FosdPair pr;
      pr.agent = i;
      pr.lower = chain[k];
      pr.upper = chain[k + 1];
      pr.pass = dominates_on_all_comprehensive(inst.omega.outcomes, inst.dist(i, pr.lower),
                                               inst.dist(i, pr.upper), &pr.witness_set);
      v.pass = v.pass && pr.pass;
      v.pairs.push_back(std::move(pr));
    }
  }
  return v;
}

FosdVerdict check_fosd(const Instance& inst, const std::vector<std::vector<int>>* actions) {
  FosdVerdict v;
  const int m = inst.m();
  const auto& om = inst.omega.outcomes;
  std::vector<std::pair<int, int>> arcs;  // (from w', to w) with w >= w'
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      if (leq(om[a], om[b])) arcs.push_back({a, b});
  for (int i = 0; i < inst.n(); ++i) {
    const auto chain = chain_for(inst, i, actions);
    for (size_t k = 0; k + 1 < chain.size(); ++k) {
      FosdPair pr;
      pr.agent = i;
      pr.lower = chain[k];
      pr.upper = chain[k + 1];
      const auto& lo = inst.dist(i, pr.lower);
      const auto& hi = inst.dist(i, pr.upper);
      LinearProgram lp;
      for (size_t e = 0; e < arcs.size(); ++e) lp.add_var(0.0);
      for (int w = 0; w < m; ++w) {
        std::vector<double> row(arcs.size(), 0.0);
        for (size_t e = 0; e < arcs.size(); ++e)
          if (arcs[e].first == w) row[e] = 1.0;
        lp.add_row(row, Rel::kEq, lo[w]);
      }
      for (int w = 0; w < m; ++w) {
        std::vector<double> row(arcs.size(), 0.0);
        for (size_t e = 0; e < arcs.size(); ++e)
          if (arcs[e].second == w) row[e] = 1.0;
        lp.add_row(row, Rel::kEq, hi[w]);
      }
      const auto res = solve_lp(lp);
      if (res.status == LpStatus::kOptimal) {
        pr.pass = true;
        pr.flow.assign(m, std::vector<double>(m, 0.0));
        for (size_t e = 0; e < arcs.size(); ++e) pr.flow[arcs[e].first][arcs[e].second] = res.x[e];
      } else if (res.status == LpStatus::kInfeasible) {
        pr.pass = false;
        pr.farkas = res.farkas;
        if (m <= 12) dominates_on_all_comprehensive(om, lo, hi, &pr.witness_set, 0.0);
      } else {
        throw Error(ErrorCode::kNumerical, "transport LP failed: " + res.message);
      }
      v.pass = v.pass && pr.pass;
      v.pairs.push_back(std::move(pr));
    }
  }
  return v;
}

}  // namespace pma
