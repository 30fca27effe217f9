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


#ifndef PMA_GEN_HPP_
#define PMA_GEN_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bayes.hpp"
#include "json.hpp"
#include "model.hpp"

namespace pma {

struct GenParams {
  int n = 2;
  int l = 3;
  int m = 3;
  int q = 1;
  std::string family = "exp_sum";
  nlohmann::json reward_params = nlohmann::json::object();  // overrides drawn params
  bool fosd = true;
  uint64_t seed = 0;
};

// Random instance: null action 0 deterministic on the zero outcome, costs
// ascending with index. With fosd set, each cheaper action is derived from
// the next costlier one by downward transfers of mass.
Instance gen_random(const GenParams& params);

struct LabelCoverEdge {
  int u = 0, v = 0;     // u in U, v in V (local indices)
  std::vector<int> pi;  // label of v -> label of u
};

struct LabelCoverGraph {
  int num_u = 0, num_v = 0, labels = 0;
  std::vector<LabelCoverEdge> edges;
};

// Agents are U nodes then V nodes; action s+1 puts the outcome e_s with
// certainty at zero cost.
Instance gen_label_cover(const LabelCoverGraph& g, double smoothing = 20.0);

// Profile of a labeling (label per U node, then per V node).
std::vector<int> labeling_profile(const std::vector<int>& labels_u, const std::vector<int>& labels_v);

// One agent per vertex, binary actions, delta = 1/|V|^2.
Instance gen_independent_set(int num_vertices, const std::vector<std::pair<int, int>>& edges);

// Profile inducing exactly the listed vertices.
std::vector<int> independent_set_profile(int num_vertices, const std::vector<int>& set);

// Per-type instances from gen_random sharing outcomes and reward, with
// `support_size` distinct type tuples and random positive weights.
BayesianInstance gen_bayes_random(const GenParams& params, int types, int support_size);

// "u v" per line; '#' starts a comment.
std::vector<std::pair<int, int>> parse_edge_list(const std::string& text, int* num_vertices = nullptr);

// Header "num_u num_v labels", then "u v pi_0 ... pi_{labels-1}" per edge.
LabelCoverGraph parse_label_cover(const std::string& text);

}  // namespace pma

#endif  // PMA_GEN_HPP_
