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

#ifndef PMA_LP_HPP_
#define PMA_LP_HPP_

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace pma {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { kMin, kMax };
enum class Rel { kLe, kEq, kGe };

struct LpRow {
  std::vector<double> coef;  // dense, one entry per variable
  Rel rel = Rel::kLe;
  double rhs = 0.0;
};

struct LinearProgram {
  Sense sense = Sense::kMin;
  std::vector<double> objective;
  std::vector<LpRow> rows;
  std::vector<double> lower;  // empty means all 0
  std::vector<double> upper;  // empty means all +inf

  int num_vars() const { return static_cast<int>(objective.size()); }
  int add_var(double obj, double lo = 0.0, double hi = kInf);
  void add_row(std::vector<double> coef, Rel rel, double rhs);
  double lower_of(int j) const { return lower.empty() ? 0.0 : lower[j]; }
  double upper_of(int j) const { return upper.empty() ? kInf : upper[j]; }
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kNumericalFailure };

const char* to_string(LpStatus s);

struct LpResult {
  LpStatus status = LpStatus::kNumericalFailure;
  double value = 0.0;
  std::vector<double> x;
  // Row multipliers. At an optimum of a min problem: y >= 0 on >= rows,
  // y <= 0 on <= rows; signs flip for max problems.
  std::vector<double> dual;
  // Infeasibility certificate: y >= 0 on >= rows, y <= 0 on <= rows, and
  // sup over the variable box of (sum_r y_r a_r) . x < sum_r y_r b_r.
  std::vector<double> farkas;
  // Improving direction when unbounded.
  std::vector<double> ray;
  int iterations = 0;
  std::string message;
};

struct SimplexOptions {
  double pivot_tol = 1e-9;
  double feas_tol = 1e-9;
  int max_iterations = 200000;
  // Switch from Dantzig pricing to Bland's rule after this many
  // consecutive degenerate pivots.
  int bland_after = 50;
};

LpResult solve_lp(const LinearProgram& lp, const SimplexOptions& opt = {});

// Max residual of row/bound violations at x.
double primal_residual(const LinearProgram& lp, const std::vector<double>& x);

// True iff y certifies infeasibility of lp's constraint system.
bool verify_farkas(const LinearProgram& lp, const std::vector<double>& y,
                   double tol = 1e-7);

// Half-space a . x <= b.
struct Cut {
  std::vector<double> a;
  double b = 0.0;
  std::string tag;
};

using SeparationOracle =
    std::function<std::optional<Cut>(const std::vector<double>& x)>;

enum class EllipsoidStatus { kPoint, kEmpty, kIndeterminate };

const char* to_string(EllipsoidStatus s);

struct EllipsoidResult {
  EllipsoidStatus status = EllipsoidStatus::kIndeterminate;
  std::vector<double> point;
  std::vector<Cut> history;
  long iterations = 0;
};

// Default budget: ceil(2 dim^2 ln(radius / tol)).
long ellipsoid_budget(int dim, double radius, double tol);

// Central-cut ellipsoid method started from the ball of `radius` around
// `center` (origin when empty). max_iters <= 0 selects the default budget.
EllipsoidResult ellipsoid_feasibility(int dim, double radius,
                                      const SeparationOracle& oracle,
                                      long max_iters, double tol,
                                      const std::vector<double>& center = {});

// Oracle over an explicit list of half-spaces; returns the most violated.
SeparationOracle make_explicit_oracle(std::vector<Cut> cuts,
                                      double tol = 0.0);

// Converts the constraint system of lp (rows and finite bounds) to cuts.
std::vector<Cut> lp_to_cuts(const LinearProgram& lp);

}  // namespace pma

#endif  // PMA_LP_HPP_
