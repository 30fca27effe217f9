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

#include "submod.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "error.hpp"
#include "rewards.hpp"
#include "rng.hpp"

namespace pma {

namespace {

BlockDist convolve(const BlockDist& a, const BlockDist& b) {
  std::map<std::vector<double>, double> acc;
  for (size_t x = 0; x < a.points.size(); ++x)
    for (size_t y = 0; y < b.points.size(); ++y) {
      std::vector<double> s(a.points[x]);
      for (size_t d = 0; d < s.size(); ++d) s[d] += b.points[y][d];
      acc[s] += a.probs[x] * b.probs[y];
    }
  BlockDist out;
  for (auto& [pt, p] : acc) {
    out.points.push_back(pt);
    out.probs.push_back(p);
  }
  return out;
}

BlockDist action_block(const Instance& inst, int i, int a) {
  BlockDist b;
  const auto& d = inst.dist(i, a);
  for (int w = 0; w < inst.m(); ++w)
    if (d[w] > 0.0) {
      b.points.push_back(inst.omega.outcomes[w]);
      b.probs.push_back(d[w]);
    }
  return b;
}

}  // namespace

double extended_reward(const PartitionProblem& pp, const ElementSet& S, long cap, long samples, uint64_t seed) {
  const Instance& inst = *pp.inst;
  if (!inst.reward.is_extensible())
    throw Error(ErrorCode::kRefusal, "custom_table rewards are undefined off the outcome tuples");
  const int n = inst.n();
  std::vector<std::vector<int>> acts(n);
  for (const auto& [i, a] : S) {
    if (i < 0 || i >= n || a < 0 || a >= inst.agents[i].num_actions())
      throw Error(ErrorCode::kUsage, "element outside the ground set");
    if (a != inst.agents[i].null_action) acts[i].push_back(a);
  }
  std::vector<BlockDist> blocks(n);
  double terms = 1.0;
  for (int i = 0; i < n; ++i) {
    std::sort(acts[i].begin(), acts[i].end());
    acts[i].erase(std::unique(acts[i].begin(), acts[i].end()), acts[i].end());
    blocks[i] = action_block(inst, i, inst.agents[i].null_action);
    for (int a : acts[i]) blocks[i] = convolve(blocks[i], action_block(inst, i, a));
    terms *= static_cast<double>(blocks[i].points.size());
  }
  if (terms <= static_cast<double>(cap)) return pp.reward_scale * expected_reward_blocks(inst.reward, inst.q(), blocks);
  Rng rng(seed);
  const int q = inst.q();
  std::vector<double> x(static_cast<size_t>(n) * q);
  double mean = 0.0;
  for (long s = 0; s < samples; ++s) {
    for (int i = 0; i < n; ++i) {
      const int w = static_cast<int>(rng.categorical(blocks[i].probs));
      for (int d = 0; d < q; ++d) x[static_cast<size_t>(i) * q + d] = blocks[i].points[w][d];
    }
    mean += (inst.reward.eval(x.data()) - mean) / static_cast<double>(s + 1);
  }
  return pp.reward_scale * mean;
}

double extended_f(const PartitionProblem& pp, const ElementSet& S, long cap, long samples, uint64_t seed) {
  double w = 0.0;
  for (const auto& [i, a] : S) {
    const Element* e = pp.element(i, a);
    if (!e) throw Error(ErrorCode::kUsage, "element outside the ground set");
    w += e->weight;
  }
  return extended_reward(pp, S, cap, samples, seed) - w;
}

double ExtendedProblem::reward(uint64_t mask) const {
  if (!table.empty()) return table[mask];
  ElementSet S;
  for (int e = 0; e < size(); ++e)
    if (mask >> e & 1u) S.push_back(ground[e]);
  return extended_reward(*pp, S, pp->enum_cap, pp->mc_samples, pp->seed);
}

ExtendedProblem make_extended(const PartitionProblem& pp, bool prune) {
  ExtendedProblem ep;
  ep.pp = &pp;
  const double limit = pp.reward_scale * pp.inst->reward_bound;
  for (int i = 0; i < pp.n(); ++i) {
    // Weights count relative to the null element of the part.
    const Element* null_e = pp.element(i, pp.inst->agents[i].null_action);
    const double base = null_e ? null_e->weight : 0.0;
    for (const auto& e : pp.parts[i]) {
      if (e.action == pp.inst->agents[i].null_action) continue;
      if (prune && e.weight - base > limit) continue;
      ep.ground.push_back({i, e.action});
      ep.lin.push_back(base - e.weight);
    }
  }
  if (ep.size() <= kExactMultilinearLimit) {
    const uint64_t full = uint64_t{1} << ep.size();
    ep.table.resize(full);
    for (uint64_t mask = 0; mask < full; ++mask) {
      ElementSet S;
      for (int e = 0; e < ep.size(); ++e)
        if (mask >> e & 1u) S.push_back(ep.ground[e]);
      ep.table[mask] = extended_reward(pp, S, pp.enum_cap, pp.mc_samples, pp.seed);
    }
  }
  return ep;
}

MultilinearEstimate multilinear_estimate(const ExtendedProblem& ep, const std::vector<double>& x, long samples,
                                         uint64_t seed) {
  const int g = ep.size();
  MultilinearEstimate est;
  est.marginals.assign(g, 0.0);
  if (!ep.table.empty()) {
    est.exact = true;
    const uint64_t full = uint64_t{1} << g;
    for (uint64_t mask = 0; mask < full; ++mask) {
      double p = 1.0;
      for (int e = 0; e < g && p != 0.0; ++e) p *= (mask >> e & 1u) ? x[e] : 1.0 - x[e];
      est.value += p * ep.table[mask];
    }
    for (int e = 0; e < g; ++e) {
      const uint64_t bit = uint64_t{1} << e;
      double d = 0.0;
      for (uint64_t mask = 0; mask < full; ++mask) {
        if (mask & bit) continue;
        double p = 1.0;
        for (int k = 0; k < g && p != 0.0; ++k)
          if (k != e) p *= (mask >> k & 1u) ? x[k] : 1.0 - x[k];
        d += p * (ep.table[mask | bit] - ep.table[mask]);
      }
      est.marginals[e] = (1.0 - x[e]) * d;
    }
    return est;
  }
  Rng rng(seed);
  const long s_count = std::max(1L, samples);
  for (long s = 0; s < s_count; ++s) {
    uint64_t mask = 0;
    for (int e = 0; e < g; ++e)
      if (rng.uniform() < x[e]) mask |= uint64_t{1} << e;
    const double base = ep.reward(mask);
    est.value += base;
    for (int e = 0; e < g; ++e)
      if (!(mask >> e & 1u)) est.marginals[e] += ep.reward(mask | (uint64_t{1} << e)) - base;
  }
  est.value /= static_cast<double>(s_count);
  for (double& v : est.marginals) v /= static_cast<double>(s_count);
  return est;
}

DrSolution solve_dr(const PartitionProblem& pp, const DrOptions& opt) {
  if (!(opt.eps > 0.0)) throw Error(ErrorCode::kUsage, "eps must be positive");
  const Instance& inst = *pp.inst;
  if (opt.verify_reward) {
    PropertyOptions po;
    PropertyVerdict pv;
    try {
      pv = check_property(inst.reward, inst, Property::kDrSubmodular, po);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kRefusal) throw;
      po.exhaustive = false;
      pv = check_property(inst.reward, inst, Property::kDrSubmodular, po);
    }
    if (!pv.pass) throw Error(ErrorCode::kRefusal, "reward is not DR-submodular");
  }
  DrSolution out;
  const auto ep = make_extended(pp);
  const int g = ep.size();
  out.ground = ep.ground;
  std::vector<double> x(g, 0.0);
  const int steps = static_cast<int>(std::ceil(3.0 / opt.eps));
  const double delta = 1.0 / steps;
  long samples = opt.samples;
  if (samples <= 0) {
    const double nl = std::max(2.0, static_cast<double>(g));
    samples = static_cast<long>(std::min(5000.0, std::ceil(nl * nl * std::log(nl / opt.eps))));
  }
  for (int t = 0; t < steps; ++t) {
    const double tau = t * delta;
    const auto est = multilinear_estimate(ep, x, samples, sub_seed(opt.seed, static_cast<uint64_t>(t)));
    const double distort = std::exp(tau - 1.0);
    std::vector<int> best(pp.n(), -1);
    std::vector<double> best_score(pp.n(), 0.0);
    for (int e = 0; e < g; ++e) {
      const double score = distort * est.marginals[e] + ep.lin[e];
      const int i = ep.ground[e].first;
      if (score > best_score[i]) {
        best_score[i] = score;
        best[i] = e;
      }
    }
    for (int i = 0; i < pp.n(); ++i)
      if (best[i] >= 0) x[best[i]] += delta;
  }
  out.fractional = x;

  // Per-part categorical rounding; keep the best of several draws.
  std::vector<int> profile(pp.n());
  for (int i = 0; i < pp.n(); ++i) profile[i] = inst.agents[i].null_action;
  std::vector<int> best_profile = profile;
  double best_value = f_value(pp, profile);
  Rng rng(sub_seed(opt.seed, static_cast<uint64_t>(steps) + 1));
  for (int r = 0; r < opt.roundings; ++r) {
    for (int i = 0; i < pp.n(); ++i) {
      profile[i] = inst.agents[i].null_action;
      double u = rng.uniform();
      for (int e = 0; e < g; ++e) {
        if (ep.ground[e].first != i) continue;
        if (u < x[e]) {
          profile[i] = ep.ground[e].second;
          break;
        }
        u -= x[e];
      }
    }
    const double v = f_value(pp, profile);
    if (v > best_value + 1e-12) {
      best_value = v;
      best_profile = profile;
    }
  }
  out.sol = finish_solution(pp, best_profile);
  return out;
}

}  // namespace pma
