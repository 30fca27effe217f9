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

#ifndef PMA_SUBMOD_HPP_
#define PMA_SUBMOD_HPP_

#include <cstdint>
#include <utility>
#include <vector>

#include "matroid.hpp"

namespace pma {

using ElementSet = std::vector<std::pair<int, int>>;  // (agent, action) pairs

// Reward of the per-agent sums of independent draws, one per action in
// S plus the null action. Exact when the summed supports are small,
// seeded Monte Carlo otherwise.
double extended_reward(const PartitionProblem& pp, const ElementSet& S, long cap = kDefaultEnumCap,
                       long samples = 200000, uint64_t seed = 0);

// extended_reward(S) minus the weights of S.
double extended_f(const PartitionProblem& pp, const ElementSet& S, long cap = kDefaultEnumCap,
                  long samples = 200000, uint64_t seed = 0);

struct ExtendedProblem {
  const PartitionProblem* pp = nullptr;
  ElementSet ground;  // non-null elements kept after pruning
  std::vector<double> lin;  // null weight of the part minus the element weight
  // Extended reward on every subset of the ground set, when small.
  std::vector<double> table;

  int size() const { return static_cast<int>(ground.size()); }
  double reward(uint64_t mask) const;
};

inline constexpr int kExactMultilinearLimit = 12;

ExtendedProblem make_extended(const PartitionProblem& pp, bool prune = true);

struct MultilinearEstimate {
  double value = 0.0;
  std::vector<double> marginals;  // F(x v e) - F(x)
  bool exact = false;
};

// Exact by subset enumeration for small ground sets, otherwise sampled.
MultilinearEstimate multilinear_estimate(const ExtendedProblem& ep, const std::vector<double>& x,
                                         long samples, uint64_t seed);

struct DrOptions {
  double eps = 0.01;
  uint64_t seed = 0;
  int roundings = 32;
  long samples = 0;  // per step when sampling; 0 picks a default
  bool verify_reward = true;
};

struct DrSolution {
  MatroidSolution sol;
  std::vector<double> fractional;  // over ep.ground
  ElementSet ground;
};

DrSolution solve_dr(const PartitionProblem& pp, const DrOptions& opt = {});

}  // namespace pma

#endif  // PMA_SUBMOD_HPP_
