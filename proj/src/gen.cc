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


#include "gen.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "error.hpp"
#include "rng.hpp"

namespace pma {

using nlohmann::json;

namespace {

// Binary coordinates keep coverage rewards diminishing-return on the grid.
OutcomeSpace make_outcomes(int m, int q, bool binary, Rng& rng) {
  OutcomeSpace omega;
  omega.q = q;
  omega.null_index = 0;
  omega.outcomes.push_back(std::vector<double>(q, 0.0));
  const int base = binary ? 2 : 3;
  if (q == 1) {
    if (binary && m > 2) throw Error(ErrorCode::kUsage, "binary scalar outcomes allow m <= 2");
    for (int w = 1; w < m; ++w) omega.outcomes.push_back({static_cast<double>(w) / (m - 1)});
    return omega;
  }
  std::vector<std::vector<double>> pool;
  int total = 1;
  for (int d = 0; d < q; ++d) total *= base;
  for (int c = 1; c < total; ++c) {
    std::vector<double> v(q);
    for (int d = 0, r = c; d < q; ++d, r /= base) v[d] = static_cast<double>(r % base) / (base - 1);
    pool.push_back(v);
  }
  if (m - 1 > static_cast<int>(pool.size())) throw Error(ErrorCode::kUsage, "too many outcomes for the dimension");
  for (int k = 0; k < m - 1; ++k) {
    const int j = k + rng.below_int(static_cast<int>(pool.size()) - k);
    std::swap(pool[k], pool[j]);
    omega.outcomes.push_back(pool[k]);
  }
  return omega;
}

bool below_eq(const std::vector<double>& a, const std::vector<double>& b) {
  for (size_t d = 0; d < a.size(); ++d)
    if (a[d] > b[d]) return false;
  return true;
}

std::vector<double> random_dist(int m, Rng& rng) {
  std::vector<double> d(m, 0.0);
  double s = 0.0;
  for (int w = 1; w < m; ++w) s += d[w] = rng.uniform(0.05, 1.0);
  for (double& v : d) v /= s;
  return d;
}

// Moves mass from outcomes to componentwise smaller nonzero outcomes.
std::vector<double> deteriorate(const std::vector<double>& src, const OutcomeSpace& omega, Rng& rng) {
  std::vector<double> d = src;
  const int m = omega.m();
  const int moves = 1 + rng.below_int(3);
  for (int t = 0; t < moves; ++t) {
    std::vector<std::pair<int, int>> arcs;
    for (int w = 1; w < m; ++w) {
      if (d[w] <= 0.0) continue;
      for (int v = 1; v < m; ++v)
        if (v != w && below_eq(omega.outcomes[v], omega.outcomes[w])) arcs.push_back({w, v});
    }
    if (arcs.empty()) break;
    const auto [from, to] = arcs[rng.below(arcs.size())];
    const double amount = d[from] * rng.uniform(0.2, 0.8);
    d[from] -= amount;
    d[to] += amount;
  }
  return d;
}

AgentSpec make_agent(const OutcomeSpace& omega, int l, bool fosd, Rng& rng) {
  const int m = omega.m();
  AgentSpec spec;
  spec.null_action = 0;
  std::vector<double> zero(m, 0.0);
  zero[0] = 1.0;
  spec.actions.push_back({0.0, zero});
  if (l == 1) return spec;
  if (m < 2) throw Error(ErrorCode::kUsage, "non-null actions need at least two outcomes");
  std::vector<double> costs;
  for (int a = 1; a < l; ++a) costs.push_back(rng.uniform(0.01, 0.3));
  std::sort(costs.begin(), costs.end());
  std::vector<std::vector<double>> dists(l);
  dists[l - 1] = random_dist(m, rng);
  for (int a = l - 2; a >= 1; --a) dists[a] = fosd ? deteriorate(dists[a + 1], omega, rng) : random_dist(m, rng);
  for (int a = 1; a < l; ++a) spec.actions.push_back({costs[a - 1], dists[a]});
  return spec;
}

json draw_reward_params(const GenParams& p, const OutcomeSpace& omega, Rng& rng) {
  json params = json::object();
  const int len = p.n * p.q;
  double max_sum = 0.0;
  for (const auto& o : omega.outcomes) {
    double s = 0.0;
    for (double v : o) s += v;
    max_sum = std::max(max_sum, s);
  }
  if (p.family == "exp_sum") {
    params["kappa"] = rng.uniform(0.5, 3.0);
    params["cap"] = std::max(1e-9, p.n * max_sum);
  } else if (p.family == "budget_additive") {
    std::vector<double> w(len);
    double top = 0.0;
    for (double& v : w) top += v = rng.uniform(0.2, 1.0);
    params["w"] = w;
    params["B"] = rng.uniform(0.3, 0.8) * top;
  } else if (p.family == "linear") {
    std::vector<double> w(len);
    for (double& v : w) v = rng.uniform(0.2, 1.0) / len;
    params["w"] = w;
  } else if (p.family == "coverage_max") {
    if (len < 2) throw Error(ErrorCode::kUsage, "coverage_max needs at least two stacked coordinates");
    json edges = json::array();
    for (int u = 0; u < len; ++u)
      for (int v = u + 1; v < len; ++v)
        if (rng.uniform() < 0.5) edges.push_back({u, v});
    if (edges.empty()) {
      const int u = rng.below_int(len - 1);
      edges.push_back({u, u + 1 + rng.below_int(len - 1 - u)});
    }
    params["edges"] = edges;
  } else {
    throw Error(ErrorCode::kUsage, "random generation does not support family " + p.family);
  }
  for (const auto& [k, v] : p.reward_params.items()) params[k] = v;
  return params;
}

void check_params(const GenParams& p) {
  if (p.n < 1 || p.l < 1 || p.m < 1 || p.q < 1) throw Error(ErrorCode::kUsage, "sizes must be positive");
}

void finalize(Instance& inst) {
  const auto issues = validate_instance(inst);
  if (!issues.empty()) throw Error(ErrorCode::kInternal, "generated instance is invalid: " + issues[0], issues);
}

}  // namespace

Instance gen_random(const GenParams& p) {
  check_params(p);
  Rng rng(p.seed);
  Instance inst;
  inst.omega = make_outcomes(p.m, p.q, p.family == "coverage_max", rng);
  for (int i = 0; i < p.n; ++i) inst.agents.push_back(make_agent(inst.omega, p.l, p.fosd, rng));
  const auto fam = family_from_string(p.family);
  if (!fam) throw Error(ErrorCode::kUsage, "unknown reward family " + p.family);
  inst.reward.family = *fam;
  inst.reward.params = draw_reward_params(p, inst.omega, rng);
  finalize(inst);
  return inst;
}

Instance gen_label_cover(const LabelCoverGraph& g, double smoothing) {
  if (g.num_u < 1 || g.num_v < 1 || g.labels < 1 || g.edges.empty())
    throw Error(ErrorCode::kValidation, "label cover needs nonempty node sets, labels and edges");
  std::vector<int> deg(g.num_u, 0);
  json edges = json::array();
  for (const auto& e : g.edges) {
    if (e.u < 0 || e.u >= g.num_u || e.v < 0 || e.v >= g.num_v)
      throw Error(ErrorCode::kValidation, "label cover edge endpoint out of range");
    if (static_cast<int>(e.pi.size()) != g.labels)
      throw Error(ErrorCode::kValidation, "label cover constraint must map every label");
    for (int s : e.pi)
      if (s < 0 || s >= g.labels) throw Error(ErrorCode::kValidation, "label cover constraint label out of range");
    ++deg[e.u];
    edges.push_back({{"u", e.u}, {"v", g.num_u + e.v}, {"pi", e.pi}});
  }
  for (int d : deg)
    if (d != deg[0]) throw Error(ErrorCode::kValidation, "U nodes must have equal degree");
  const int q = g.labels;
  Instance inst;
  inst.omega.q = q;
  inst.omega.null_index = 0;
  inst.omega.outcomes.push_back(std::vector<double>(q, 0.0));
  for (int s = 0; s < q; ++s) {
    std::vector<double> e(q, 0.0);
    e[s] = 1.0;
    inst.omega.outcomes.push_back(e);
  }
  for (int i = 0; i < g.num_u + g.num_v; ++i) {
    AgentSpec spec;
    for (int a = 0; a <= q; ++a) {
      std::vector<double> d(q + 1, 0.0);
      d[a] = 1.0;
      spec.actions.push_back({0.0, d});
    }
    inst.agents.push_back(spec);
  }
  inst.reward.family = RewardFamily::kLabelCoverSmooth;
  inst.reward.params = {{"M", smoothing}, {"edges", edges}};
  inst.reward_bound = 1.0 + q * std::exp(-smoothing);
  finalize(inst);
  return inst;
}

std::vector<int> labeling_profile(const std::vector<int>& labels_u, const std::vector<int>& labels_v) {
  std::vector<int> profile;
  for (int s : labels_u) profile.push_back(s + 1);
  for (int s : labels_v) profile.push_back(s + 1);
  return profile;
}

Instance gen_independent_set(int num_vertices, const std::vector<std::pair<int, int>>& edges) {
  if (num_vertices < 1) throw Error(ErrorCode::kValidation, "graph needs at least one vertex");
  std::vector<int> deg(num_vertices, 0);
  std::set<std::pair<int, int>> seen;
  json list = json::array();
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= num_vertices || v >= num_vertices || u == v)
      throw Error(ErrorCode::kValidation, "graph must be simple");
    if (!seen.insert({std::min(u, v), std::max(u, v)}).second) throw Error(ErrorCode::kValidation, "duplicate edge");
    ++deg[u];
    ++deg[v];
    list.push_back({u, v});
  }
  for (int d : deg)
    if (d == 0) throw Error(ErrorCode::kValidation, "graph has an isolated vertex");
  const double delta = 1.0 / (static_cast<double>(num_vertices) * num_vertices);
  Instance inst;
  inst.omega.q = 1;
  inst.omega.null_index = 0;
  inst.omega.outcomes = {{0.0}, {1.0}};
  for (int i = 0; i < num_vertices; ++i) {
    AgentSpec spec;
    spec.actions.push_back({0.0, {1.0, 0.0}});
    spec.actions.push_back({1.0 - delta, {0.0, 1.0}});
    inst.agents.push_back(spec);
  }
  inst.reward.family = RewardFamily::kCoverageMax;
  inst.reward.params = {{"edges", list}, {"scale", 1.0}};
  inst.reward_bound = num_vertices;
  finalize(inst);
  return inst;
}

std::vector<int> independent_set_profile(int num_vertices, const std::vector<int>& set) {
  std::vector<int> profile(num_vertices, 0);
  for (int v : set) profile.at(v) = 1;
  return profile;
}

BayesianInstance gen_bayes_random(const GenParams& p, int types, int support_size) {
  check_params(p);
  if (types < 1) throw Error(ErrorCode::kUsage, "types must be positive");
  const Instance base = gen_random(p);
  BayesianInstance bi;
  bi.num_types = types;
  bi.omega = base.omega;
  bi.reward = base.reward;
  bi.reward_bound = base.reward_bound;
  bi.per_type.assign(p.n, {});
  Rng rng(sub_seed(p.seed, 1));
  for (int i = 0; i < p.n; ++i) {
    bi.per_type[i].push_back(base.agents[i]);
    for (int k = 1; k < types; ++k) bi.per_type[i].push_back(make_agent(bi.omega, p.l, p.fosd, rng));
  }
  int total = 1;
  for (int i = 0; i < p.n; ++i) total *= types;
  if (support_size < 1 || support_size > total) throw Error(ErrorCode::kUsage, "support size out of range");
  std::vector<int> codes(total);
  for (int c = 0; c < total; ++c) codes[c] = c;
  for (int k = 0; k < support_size; ++k) std::swap(codes[k], codes[k + rng.below_int(total - k)]);
  codes.resize(support_size);
  std::sort(codes.begin(), codes.end());
  double sum = 0.0;
  for (int c : codes) {
    bi.support.push_back(bi.decode(c));
    bi.prob.push_back(rng.uniform(0.2, 1.0));
    sum += bi.prob.back();
  }
  double acc = 0.0;
  for (size_t s = 0; s + 1 < bi.prob.size(); ++s) acc += bi.prob[s] /= sum;
  bi.prob.back() = 1.0 - acc;
  const auto issues = validate_bayes(bi);
  if (!issues.empty()) throw Error(ErrorCode::kInternal, "generated Bayesian instance is invalid: " + issues[0], issues);
  return bi;
}

namespace {

std::vector<std::vector<long>> numeric_lines(const std::string& text) {
  std::vector<std::vector<long>> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    line = line.substr(0, line.find('#'));
    std::istringstream ls(line);
    std::vector<long> nums;
    std::string tok;
    while (ls >> tok) {
      try {
        size_t used = 0;
        nums.push_back(std::stol(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw Error(ErrorCode::kValidation, "non-integer token \"" + tok + "\" in graph input");
      }
    }
    if (!nums.empty()) out.push_back(nums);
  }
  return out;
}

}  // namespace

std::vector<std::pair<int, int>> parse_edge_list(const std::string& text, int* num_vertices) {
  std::vector<std::pair<int, int>> edges;
  int top = -1;
  for (const auto& nums : numeric_lines(text)) {
    if (nums.size() != 2) throw Error(ErrorCode::kValidation, "edge lines must hold two vertices");
    edges.push_back({static_cast<int>(nums[0]), static_cast<int>(nums[1])});
    top = std::max<int>(top, static_cast<int>(std::max(nums[0], nums[1])));
  }
  if (num_vertices) *num_vertices = top + 1;
  return edges;
}

LabelCoverGraph parse_label_cover(const std::string& text) {
  const auto lines = numeric_lines(text);
  if (lines.empty() || lines[0].size() != 3)
    throw Error(ErrorCode::kValidation, "label cover input needs a \"num_u num_v labels\" header");
  LabelCoverGraph g;
  g.num_u = static_cast<int>(lines[0][0]);
  g.num_v = static_cast<int>(lines[0][1]);
  g.labels = static_cast<int>(lines[0][2]);
  for (size_t k = 1; k < lines.size(); ++k) {
    if (static_cast<int>(lines[k].size()) != 2 + g.labels)
      throw Error(ErrorCode::kValidation, "label cover edge lines need u, v and one image per label");
    LabelCoverEdge e;
    e.u = static_cast<int>(lines[k][0]);
    e.v = static_cast<int>(lines[k][1]);
    for (int s = 0; s < g.labels; ++s) e.pi.push_back(static_cast<int>(lines[k][2 + s]));
    g.edges.push_back(e);
  }
  return g;
}

}  // namespace pma
