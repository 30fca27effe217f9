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

#ifndef PMA_SUPERMOD_HPP_
#define PMA_SUPERMOD_HPP_

#include <cstdint>
#include <functional>
#include <vector>

#include "matroid.hpp"

namespace pma {

using SetFunction = std::function<double(const std::vector<bool>&)>;

struct SfmResult {
  std::vector<bool> set;
  double value = 0.0;
  bool converged = true;
  int iterations = 0;
  std::vector<double> min_norm_point;
};

// Fujishige-Wolfe minimum-norm point; decodes the minimizer from the level
// sets of the final point.
SfmResult sfm_min_norm(const SetFunction& f, int ground_size, double tol = 1e-9,
                       int max_iterations = 100000);

// Per-agent chains of ground actions in canonical order (null first).
std::vector<std::vector<int>> lattice_chains(const PartitionProblem& pp);

// Threshold encoding: element (i, t) means "agent i sits at level >= t+1".
struct ThresholdEncoding {
  std::vector<std::vector<int>> chains;
  std::vector<std::pair<int, int>> elements;  // (agent, t) with t >= 1
  double penalty = 0.0;

  int size() const { return static_cast<int>(elements.size()); }
  // Level index (0-based) of every agent for the prefix-closed part of S.
  std::vector<int> levels(const std::vector<bool>& set) const;
  int violations(const std::vector<bool>& set) const;
  std::vector<int> profile(const std::vector<int>& levels) const;
};

ThresholdEncoding make_encoding(const PartitionProblem& pp);

// The penalized objective -h(prefix part) + M * (elements outside it).
double encoded_value(const PartitionProblem& pp, const ThresholdEncoding& enc,
                     const std::vector<bool>& set);

struct IrFosdOptions {
  bool verify_fosd = true;
  bool verify_reward = true;
  double sfm_tol = 1e-9;
};

// Exact optimum for IR-supermodular rewards under FOSD chains. Throws
// Error(kRefusal) when a precondition fails.
MatroidSolution solve_ir_fosd(const PartitionProblem& pp, const IrFosdOptions& opt = {});

struct OrderedVerdict {
  bool pass = true;
  long checked = 0;
  std::vector<int> witness_a, witness_b;  // profiles
  double violation = 0.0;
};

OrderedVerdict check_ordered_supermodular(const PartitionProblem& pp, bool exhaustive = true,
                                          long cap = 1000000, long trials = 10000,
                                          uint64_t seed = 0, double tol = 1e-9);

}  // namespace pma

#endif  // PMA_SUPERMOD_HPP_
