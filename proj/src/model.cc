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

#include "model.hpp"

#include <cmath>
#include <cstdio>
#include <set>

#include "error.hpp"
#include "rng.hpp"

namespace pma {

using nlohmann::json;

double parse_number(const json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    size_t pos = 0;
    double d = 0.0;
    try {
      d = std::stod(s, &pos);
    } catch (...) {
      throw Error(ErrorCode::kValidation, "not a number: \"" + s + "\"");
    }
    if (pos != s.size()) throw Error(ErrorCode::kValidation, "not a number: \"" + s + "\"");
    return d;
  }
  throw Error(ErrorCode::kValidation, "expected a number, got " + v.dump());
}

namespace {

std::vector<double> parse_vector(const json& v, const std::string& what) {
  if (!v.is_array()) throw Error(ErrorCode::kValidation, what + " must be an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& e : v) out.push_back(parse_number(e));
  return out;
}

}  // namespace

Instance instance_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kValidation, "instance must be a JSON object");
  if (j.contains("version") && j["version"] != "pma-1")
    throw Error(ErrorCode::kValidation, "unsupported version " + j["version"].dump());
  for (const char* key : {"q", "outcomes", "agents", "reward"}) {
    if (!j.contains(key)) throw Error(ErrorCode::kValidation, std::string("missing field \"") + key + "\"");
  }
  Instance inst;
  inst.omega.q = j["q"].get<int>();
  if (!j["outcomes"].is_array()) throw Error(ErrorCode::kValidation, "outcomes must be an array");
  for (const auto& o : j["outcomes"]) inst.omega.outcomes.push_back(parse_vector(o, "outcome"));
  if (j.contains("null_outcome") && !j["null_outcome"].is_null())
    inst.omega.null_index = j["null_outcome"].get<int>();
  if (!j["agents"].is_array()) throw Error(ErrorCode::kValidation, "agents must be an array");
  int idx = 0;
  for (const auto& a : j["agents"]) {
    const std::string who = "agent " + std::to_string(idx++);
    if (!a.contains("costs") || !a.contains("dists"))
      throw Error(ErrorCode::kValidation, who + ": missing costs or dists");
    if (!a.contains("null_action")) throw Error(ErrorCode::kValidation, who + ": missing null action");
    AgentSpec spec;
    const auto costs = parse_vector(a["costs"], who + " costs");
    if (!a["dists"].is_array() || a["dists"].size() != costs.size())
      throw Error(ErrorCode::kValidation, who + ": dimension mismatch between costs and dists");
    for (size_t k = 0; k < costs.size(); ++k)
      spec.actions.push_back({costs[k], parse_vector(a["dists"][k], who + " dist")});
    spec.null_action = a["null_action"].get<int>();
    inst.agents.push_back(std::move(spec));
  }
  inst.reward = reward_from_json(j["reward"]);
  if (j.contains("reward_bound")) inst.reward_bound = parse_number(j["reward_bound"]);
  auto issues = validate_instance(inst);
  if (!issues.empty()) {
    std::string msg = "invalid instance: " + issues.front();
    if (issues.size() > 1) msg += " (and " + std::to_string(issues.size() - 1) + " more)";
    throw Error(ErrorCode::kValidation, msg, issues);
  }
  return inst;
}

Instance load_instance(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kValidation, std::string("malformed JSON: ") + e.what());
  }
  try {
    return instance_from_json(j);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kValidation, std::string("malformed instance: ") + e.what());
  }
}

std::vector<std::string> validate_instance(Instance& inst, long range_cap) {
  std::vector<std::string> issues;
  auto& om = inst.omega;
  const int m = om.m();
  if (om.q < 1) issues.push_back("q must be a positive integer");
  if (m < 1) issues.push_back("outcome set is empty");
  std::set<std::vector<double>> seen;
  for (int w = 0; w < m; ++w) {
    const auto& o = om.outcomes[w];
    if (static_cast<int>(o.size()) != om.q)
      issues.push_back("dimension mismatch: outcome " + std::to_string(w) + " has length " +
                       std::to_string(o.size()));
    for (double v : o) {
      if (!(v >= 0.0) || !std::isfinite(v)) {
        issues.push_back("outcome " + std::to_string(w) + " has a negative or non-finite component");
        break;
      }
    }
    if (!seen.insert(o).second) issues.push_back("outcome " + std::to_string(w) + " duplicates an earlier outcome");
  }
  if (om.null_index >= 0) {
    if (om.null_index >= m) {
      issues.push_back("null outcome index out of range");
    } else {
      for (double v : om.outcomes[om.null_index])
        if (v != 0.0) {
          issues.push_back("null outcome is not the zero vector");
          break;
        }
    }
  }
  if (inst.n() < 1) issues.push_back("at least one agent is required");
  for (int i = 0; i < inst.n(); ++i) {
    auto& ag = inst.agents[i];
    const std::string who = "agent " + std::to_string(i);
    if (ag.actions.empty()) issues.push_back(who + ": no actions");
    if (ag.null_action < 0 || ag.null_action >= ag.num_actions()) {
      issues.push_back(who + ": missing null action");
    } else if (ag.actions[ag.null_action].cost != 0.0) {
      issues.push_back(who + ": null action cost must be exactly 0");
    }
    for (int a = 0; a < ag.num_actions(); ++a) {
      auto& act = ag.actions[a];
      const std::string wa = who + " action " + std::to_string(a);
      if (!(act.cost >= 0.0 && act.cost <= 1.0))
        issues.push_back(wa + ": cost out of range [0,1] (" + std::to_string(act.cost) + ")");
      if (static_cast<int>(act.dist.size()) != m) {
        issues.push_back(wa + ": dimension mismatch, dist has length " + std::to_string(act.dist.size()));
        continue;
      }
      double s = 0.0;
      bool neg = false;
      for (double p : act.dist) {
        if (!(p >= 0.0) || !std::isfinite(p)) neg = true;
        s += p;
      }
      if (neg) {
        issues.push_back(wa + ": distribution has a negative entry");
      } else if (std::fabs(s - 1.0) > kProbTol) {
        issues.push_back(wa + ": distribution sum " + std::to_string(s) + " differs from 1");
      } else {
        for (double& p : act.dist) p /= s;
      }
    }
  }
  if (!issues.empty()) return issues;
  try {
    inst.reward.bind(inst.n(), om.q, om.outcomes);
  } catch (const Error& e) {
    issues.push_back(e.what());
    return issues;
  }
  // Reward range on outcome tuples.
  const int n = inst.n();
  double count = std::pow(static_cast<double>(m), n);
  std::vector<int> idx(n, 0);
  auto check = [&](const std::vector<int>& t) {
    double v;
    try {
      v = inst.reward.eval(stack_tuple(inst, t));
    } catch (const Error& e) {
      issues.push_back(e.what());
      return false;
    }
    if (!(v >= -1e-9 && v <= inst.reward_bound + 1e-9)) {
      char buf[128];
      std::snprintf(buf, sizeof(buf), "reward %.6g outside [0, %.6g] on an outcome tuple", v,
                    inst.reward_bound);
      issues.push_back(buf);
      return false;
    }
    return true;
  };
  if (count <= static_cast<double>(range_cap)) {
    while (true) {
      if (!check(idx)) break;
      int k = n - 1;
      while (k >= 0 && ++idx[k] == m) idx[k--] = 0;
      if (k < 0) break;
    }
  } else {
    Rng rng(0x5eed);
    for (int s = 0; s < 20000; ++s) {
      for (int i = 0; i < n; ++i) idx[i] = rng.below_int(m);
      if (!check(idx)) break;
    }
  }
  return issues;
}

json instance_to_json(const Instance& inst) {
  json j;
  j["version"] = "pma-1";
  j["q"] = inst.omega.q;
  j["outcomes"] = inst.omega.outcomes;
  if (inst.omega.null_index >= 0) j["null_outcome"] = inst.omega.null_index;
  json agents = json::array();
  for (const auto& ag : inst.agents) {
    json a;
    std::vector<double> costs;
    std::vector<std::vector<double>> dists;
    for (const auto& act : ag.actions) {
      costs.push_back(act.cost);
      dists.push_back(act.dist);
    }
    a["costs"] = costs;
    a["dists"] = dists;
    a["null_action"] = ag.null_action;
    agents.push_back(a);
  }
  j["agents"] = agents;
  j["reward"] = inst.reward.to_json();
  if (inst.reward_bound != 1.0) j["reward_bound"] = inst.reward_bound;
  return j;
}

std::vector<double> stack_tuple(const Instance& inst, const std::vector<int>& idx) {
  const int q = inst.q();
  std::vector<double> x(static_cast<size_t>(inst.n()) * q);
  for (int i = 0; i < inst.n(); ++i)
    for (int d = 0; d < q; ++d) x[static_cast<size_t>(i) * q + d] = inst.omega.outcomes[idx[i]][d];
  return x;
}

double expected_reward_blocks(const RewardSpec& g, int q, const std::vector<BlockDist>& blocks) {
  const int n = static_cast<int>(blocks.size());
  std::vector<double> x(static_cast<size_t>(n) * q, 0.0);
  std::vector<int> idx(n, 0);
  for (int i = 0; i < n; ++i) {
    if (blocks[i].points.empty()) return 0.0;
    for (int d = 0; d < q; ++d) x[static_cast<size_t>(i) * q + d] = blocks[i].points[0][d];
  }
  // prefix[i] = product of probabilities of blocks < i
  std::vector<double> prefix(n + 1, 1.0);
  for (int i = 0; i < n; ++i) prefix[i + 1] = prefix[i] * blocks[i].probs[0];
  double total = 0.0;
  while (true) {
    if (prefix[n] != 0.0) total += prefix[n] * g.eval(x.data());
    int k = n - 1;
    while (k >= 0) {
      if (++idx[k] < static_cast<int>(blocks[k].points.size())) break;
      idx[k] = 0;
      --k;
    }
    if (k < 0) break;
    for (int i = k; i < n; ++i) {
      const auto& pt = blocks[i].points[idx[i]];
      for (int d = 0; d < q; ++d) x[static_cast<size_t>(i) * q + d] = pt[d];
      prefix[i + 1] = prefix[i] * blocks[i].probs[idx[i]];
    }
  }
  return total;
}

double expected_reward_exact(const Instance& inst, const std::vector<int>& profile, long cap) {
  const int n = inst.n();
  if (static_cast<int>(profile.size()) != n)
    throw Error(ErrorCode::kUsage, "profile length differs from the number of agents");
  std::vector<BlockDist> blocks(n);
  double terms = 1.0;
  for (int i = 0; i < n; ++i) {
    if (profile[i] < 0 || profile[i] >= inst.agents[i].num_actions())
      throw Error(ErrorCode::kUsage, "invalid action index in profile");
    const auto& d = inst.dist(i, profile[i]);
    for (int w = 0; w < inst.m(); ++w) {
      if (d[w] > 0.0) {
        blocks[i].points.push_back(inst.omega.outcomes[w]);
        blocks[i].probs.push_back(d[w]);
      }
    }
    terms *= static_cast<double>(blocks[i].points.size());
  }
  if (terms > static_cast<double>(cap))
    throw Error(ErrorCode::kRefusal, "enumeration cap exceeded; use Monte-Carlo evaluation");
  return expected_reward_blocks(inst.reward, inst.q(), blocks);
}

McEstimate expected_reward_mc(const Instance& inst, const std::vector<int>& profile, long samples,
                              uint64_t seed) {
  const int n = inst.n();
  if (static_cast<int>(profile.size()) != n)
    throw Error(ErrorCode::kUsage, "profile length differs from the number of agents");
  if (samples < 1) throw Error(ErrorCode::kUsage, "samples must be positive");
  std::vector<std::vector<double>> cdf(n);
  for (int i = 0; i < n; ++i) {
    if (profile[i] < 0 || profile[i] >= inst.agents[i].num_actions())
      throw Error(ErrorCode::kUsage, "invalid action index in profile");
    double s = 0.0;
    for (double p : inst.dist(i, profile[i])) cdf[i].push_back(s += p);
  }
  Rng rng(seed);
  const int q = inst.q();
  std::vector<double> x(static_cast<size_t>(n) * q);
  double mean = 0.0, m2 = 0.0;
  for (long s = 0; s < samples; ++s) {
    for (int i = 0; i < n; ++i) {
      const double u = rng.uniform() * cdf[i].back();
      int w = 0;
      while (w + 1 < static_cast<int>(cdf[i].size()) && u >= cdf[i][w]) ++w;
      for (int d = 0; d < q; ++d) x[static_cast<size_t>(i) * q + d] = inst.omega.outcomes[w][d];
    }
    const double v = inst.reward.eval(x.data());
    const double delta = v - mean;
    mean += delta / static_cast<double>(s + 1);
    m2 += delta * (v - mean);
  }
  McEstimate est;
  est.value = mean;
  est.samples = samples;
  est.std_error = samples > 1 ? std::sqrt(std::max(0.0, m2 / (samples - 1)) / samples) : 0.0;
  return est;
}

double expected_reward(const Instance& inst, const std::vector<int>& profile, long cap,
                       long samples, uint64_t seed) {
  double terms = 1.0;
  for (int i = 0; i < inst.n(); ++i) {
    int s = 0;
    for (double p : inst.dist(i, profile[i])) s += p > 0.0;
    terms *= s;
  }
  if (terms <= static_cast<double>(cap)) return expected_reward_exact(inst, profile, cap);
  return expected_reward_mc(inst, profile, samples, seed).value;
}

double expected_payment(const Instance& inst, const Contract& c) {
  double pay = 0.0;
  for (int i = 0; i < inst.n(); ++i) {
    const auto& d = inst.dist(i, c.recommendations[i]);
    for (int w = 0; w < inst.m(); ++w) pay += d[w] * c.payments[i][w];
  }
  return pay;
}

double principal_utility(const Instance& inst, const Contract& c, EvalMode mode, long samples,
                         uint64_t seed) {
  if (static_cast<int>(c.payments.size()) != inst.n() ||
      static_cast<int>(c.recommendations.size()) != inst.n())
    throw Error(ErrorCode::kUsage, "contract dimension mismatch");
  for (const auto& row : c.payments)
    if (static_cast<int>(row.size()) != inst.m()) throw Error(ErrorCode::kUsage, "contract dimension mismatch");
  const double r = mode == EvalMode::kExact
                       ? expected_reward_exact(inst, c.recommendations)
                       : expected_reward_mc(inst, c.recommendations, samples, seed).value;
  return r - expected_payment(inst, c);
}

json contract_to_json(const Contract& c) {
  return json{{"payments", c.payments}, {"recommendations", c.recommendations}};
}

Contract contract_from_json(const json& j) {
  Contract c;
  c.payments = j.at("payments").get<std::vector<std::vector<double>>>();
  c.recommendations = j.at("recommendations").get<std::vector<int>>();
  return c;
}

std::string digest_hex(const json& j) {
  const std::string s = j.dump();
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace pma
