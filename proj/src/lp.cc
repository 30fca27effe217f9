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

#include "lp.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace pma {

int LinearProgram::add_var(double obj, double lo, double hi) {
  const int j = num_vars();
  if (!lower.empty() || lo != 0.0) {
    lower.resize(j, 0.0);
    lower.push_back(lo);
  }
  if (!upper.empty() || hi != kInf) {
    upper.resize(j, kInf);
    upper.push_back(hi);
  }
  objective.push_back(obj);
  for (auto& r : rows) r.coef.resize(j + 1, 0.0);
  return j;
}

void LinearProgram::add_row(std::vector<double> coef, Rel rel, double rhs) {
  coef.resize(objective.size(), 0.0);
  rows.push_back(LpRow{std::move(coef), rel, rhs});
}

const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::kOptimal: return "OPTIMAL";
    case LpStatus::kInfeasible: return "INFEASIBLE";
    case LpStatus::kUnbounded: return "UNBOUNDED";
    case LpStatus::kNumericalFailure: return "NUMERICAL_FAILURE";
  }
  return "?";
}

const char* to_string(EllipsoidStatus s) {
  switch (s) {
    case EllipsoidStatus::kPoint: return "POINT";
    case EllipsoidStatus::kEmpty: return "EMPTY";
    case EllipsoidStatus::kIndeterminate: return "INDETERMINATE";
  }
  return "?";
}

namespace {

struct Term {
  int col;
  double coef;
};

// Standard form min c'x' s.t. A'x' = b' >= 0, x' >= 0, with one artificial
// column per row appended after the structural and slack columns.
class Tableau {
 public:
  Tableau(int m, int n) : m_(m), n_(n), t_((m + 1) * static_cast<size_t>(n + 1), 0.0), basis_(m, -1) {}

  double& at(int r, int c) { return t_[static_cast<size_t>(r) * (n_ + 1) + c]; }
  double at(int r, int c) const { return t_[static_cast<size_t>(r) * (n_ + 1) + c]; }
  double& rhs(int r) { return at(r, n_); }
  double& cost(int c) { return at(m_, c); }

  void pivot(int pr, int pc) {
    const double inv = 1.0 / at(pr, pc);
    double* prow = &t_[static_cast<size_t>(pr) * (n_ + 1)];
    for (int c = 0; c <= n_; ++c) prow[c] *= inv;
    prow[pc] = 1.0;
    for (int r = 0; r <= m_; ++r) {
      if (r == pr) continue;
      double* row = &t_[static_cast<size_t>(r) * (n_ + 1)];
      const double f = row[pc];
      if (f == 0.0) continue;
      for (int c = 0; c <= n_; ++c) row[c] -= f * prow[c];
      row[pc] = 0.0;
    }
    basis_[pr] = pc;
  }

  int m_, n_;
  std::vector<double> t_;
  std::vector<int> basis_;
};

enum class PhaseOutcome { kOptimal, kUnbounded, kIterationLimit };

// Minimizes the cost row over columns [0, allowed_end). On unbounded exit
// `entering` holds the offending column.
PhaseOutcome run_phase(Tableau& T, int allowed_end, const SimplexOptions& opt,
                       int& iterations, int& entering) {
  int degenerate = 0;
  while (true) {
    if (iterations >= opt.max_iterations) return PhaseOutcome::kIterationLimit;
    const bool bland = degenerate >= opt.bland_after;
    int pc = -1;
    double best = -opt.feas_tol;
    for (int c = 0; c < allowed_end; ++c) {
      const double d = T.cost(c);
      if (d < best) {
        pc = c;
        if (bland) break;
        best = d;
      }
    }
    if (pc < 0) return PhaseOutcome::kOptimal;
    int pr = -1;
    double best_ratio = kInf;
    for (int r = 0; r < T.m_; ++r) {
      const double a = T.at(r, pc);
      if (a <= opt.pivot_tol) continue;
      const double ratio = std::max(0.0, T.rhs(r)) / a;
      bool take = pr < 0 || ratio < best_ratio - 1e-12;
      if (!take && ratio <= best_ratio + 1e-12) {
        take = bland ? T.basis_[r] < T.basis_[pr] : a > T.at(pr, pc);
      }
      if (take) {
        best_ratio = std::min(best_ratio, ratio);
        pr = r;
      }
    }
    if (pr < 0) {
      entering = pc;
      return PhaseOutcome::kUnbounded;
    }
    degenerate = (best_ratio <= 1e-12) ? degenerate + 1 : 0;
    T.pivot(pr, pc);
    ++iterations;
  }
}

}  // namespace

LpResult solve_lp(const LinearProgram& lp, const SimplexOptions& opt) {
  LpResult res;
  const int nv = lp.num_vars();
  const double sign = lp.sense == Sense::kMax ? -1.0 : 1.0;

  // Variable substitution x_j = offset_j + sum terms.
  std::vector<std::vector<Term>> sub(nv);
  std::vector<double> offset(nv, 0.0);
  std::vector<std::pair<int, double>> ub_rows;  // (col, bound)
  int ncol = 0;
  for (int j = 0; j < nv; ++j) {
    const double lo = lp.lower_of(j), hi = lp.upper_of(j);
    if (!std::isfinite(lp.objective[j])) {
      res.message = "non-finite objective coefficient";
      return res;
    }
    if (lo > hi) {
      res.status = LpStatus::kInfeasible;
      res.farkas.assign(lp.rows.size(), 0.0);
      res.message = "empty variable box";
      return res;
    }
    if (std::isfinite(lo)) {
      offset[j] = lo;
      sub[j].push_back({ncol, 1.0});
      if (std::isfinite(hi)) ub_rows.push_back({ncol, hi - lo});
      ++ncol;
    } else if (std::isfinite(hi)) {
      offset[j] = hi;
      sub[j].push_back({ncol++, -1.0});
    } else {
      sub[j].push_back({ncol++, 1.0});
      sub[j].push_back({ncol++, -1.0});
    }
  }
  const int n_struct = ncol;
  const int n_user_rows = static_cast<int>(lp.rows.size());
  const int m = n_user_rows + static_cast<int>(ub_rows.size());

  // Dense transformed rows before slacks.
  std::vector<std::vector<double>> A(m, std::vector<double>(n_struct, 0.0));
  std::vector<double> b(m, 0.0);
  std::vector<Rel> rel(m, Rel::kLe);
  for (int r = 0; r < n_user_rows; ++r) {
    const auto& row = lp.rows[r];
    double rhs = row.rhs;
    for (int j = 0; j < nv; ++j) {
      const double a = j < static_cast<int>(row.coef.size()) ? row.coef[j] : 0.0;
      if (a == 0.0) continue;
      if (!std::isfinite(a)) {
        res.message = "non-finite constraint coefficient";
        return res;
      }
      rhs -= a * offset[j];
      for (const auto& t : sub[j]) A[r][t.col] += a * t.coef;
    }
    b[r] = rhs;
    rel[r] = row.rel;
  }
  for (size_t k = 0; k < ub_rows.size(); ++k) {
    const int r = n_user_rows + static_cast<int>(k);
    A[r][ub_rows[k].first] = 1.0;
    b[r] = ub_rows[k].second;
    rel[r] = Rel::kLe;
  }

  int n_slack = 0;
  for (int r = 0; r < m; ++r) n_slack += rel[r] != Rel::kEq;
  const int art0 = n_struct + n_slack;
  const int N = art0 + m;
  Tableau T(m, N);
  std::vector<double> row_sign(m, 1.0);
  {
    int s = n_struct;
    for (int r = 0; r < m; ++r) {
      row_sign[r] = b[r] < 0 ? -1.0 : 1.0;
      for (int c = 0; c < n_struct; ++c) T.at(r, c) = row_sign[r] * A[r][c];
      if (rel[r] == Rel::kLe) T.at(r, s++) = row_sign[r];
      if (rel[r] == Rel::kGe) T.at(r, s++) = -row_sign[r];
      T.at(r, art0 + r) = 1.0;
      T.rhs(r) = row_sign[r] * b[r];
      T.basis_[r] = art0 + r;
    }
  }

  // Phase 1.
  for (int c = 0; c <= N; ++c) {
    double s = 0.0;
    if (c < art0 || c == N) {
      for (int r = 0; r < m; ++r) s += T.at(r, c);
      T.cost(c) = -s;
    } else {
      T.cost(c) = 0.0;
    }
  }
  int entering = -1;
  auto out = run_phase(T, art0, opt, res.iterations, entering);
  if (out == PhaseOutcome::kIterationLimit) {
    res.message = "iteration limit in phase 1";
    return res;
  }
  double bnorm = 1.0;
  for (double v : b) bnorm = std::max(bnorm, std::fabs(v));
  const double infeas = -T.cost(N);
  if (infeas > 1e-8 * bnorm) {
    res.status = LpStatus::kInfeasible;
    res.farkas.assign(n_user_rows, 0.0);
    for (int r = 0; r < n_user_rows; ++r) {
      const double u = 1.0 - T.cost(art0 + r);
      res.farkas[r] = row_sign[r] * u;
    }
    res.message = "phase 1 optimum positive";
    return res;
  }

  // Drive artificials out of the basis where possible.
  for (int r = 0; r < m; ++r) {
    if (T.basis_[r] < art0) continue;
    int best = -1;
    double bv = opt.pivot_tol * 10;
    for (int c = 0; c < art0; ++c) {
      if (std::fabs(T.at(r, c)) > bv) {
        bv = std::fabs(T.at(r, c));
        best = c;
      }
    }
    if (best >= 0) T.pivot(r, best);
  }

  // Phase 2 costs.
  std::vector<double> cost(N, 0.0);
  for (int j = 0; j < nv; ++j)
    for (const auto& t : sub[j]) cost[t.col] += sign * lp.objective[j] * t.coef;
  for (int c = 0; c <= N; ++c) {
    double z = c < N ? cost[c] : 0.0;
    for (int r = 0; r < m; ++r) z -= cost[T.basis_[r]] * T.at(r, c);
    T.cost(c) = z;
  }
  out = run_phase(T, art0, opt, res.iterations, entering);
  if (out == PhaseOutcome::kIterationLimit) {
    res.message = "iteration limit in phase 2";
    return res;
  }

  std::vector<double> xs(N, 0.0);
  if (out == PhaseOutcome::kUnbounded) {
    xs[entering] = 1.0;
    for (int r = 0; r < m; ++r) xs[T.basis_[r]] = -T.at(r, entering);
    res.status = LpStatus::kUnbounded;
    res.ray.assign(nv, 0.0);
    for (int j = 0; j < nv; ++j)
      for (const auto& t : sub[j]) res.ray[j] += t.coef * xs[t.col];
    res.message = "unbounded direction found";
    return res;
  }

  for (int r = 0; r < m; ++r) xs[T.basis_[r]] = std::max(0.0, T.rhs(r));
  res.x.assign(nv, 0.0);
  for (int j = 0; j < nv; ++j) {
    double v = offset[j];
    for (const auto& t : sub[j]) v += t.coef * xs[t.col];
    res.x[j] = v;
  }
  res.value = 0.0;
  for (int j = 0; j < nv; ++j) res.value += lp.objective[j] * res.x[j];
  res.dual.assign(n_user_rows, 0.0);
  for (int r = 0; r < n_user_rows; ++r) {
    const double u = -T.cost(art0 + r);
    res.dual[r] = sign * row_sign[r] * u;
  }
  double scale = 1.0;
  for (const auto& row : lp.rows) scale = std::max(scale, std::fabs(row.rhs));
  const double resid = primal_residual(lp, res.x);
  if (resid > 1e-6 * scale) {
    res.status = LpStatus::kNumericalFailure;
    res.message = "primal residual too large";
    return res;
  }
  res.status = LpStatus::kOptimal;
  return res;
}

double primal_residual(const LinearProgram& lp, const std::vector<double>& x) {
  double worst = 0.0;
  for (const auto& row : lp.rows) {
    double s = 0.0;
    for (size_t j = 0; j < row.coef.size() && j < x.size(); ++j) s += row.coef[j] * x[j];
    double v = 0.0;
    if (row.rel == Rel::kLe) v = s - row.rhs;
    if (row.rel == Rel::kGe) v = row.rhs - s;
    if (row.rel == Rel::kEq) v = std::fabs(s - row.rhs);
    worst = std::max(worst, v);
  }
  for (int j = 0; j < lp.num_vars(); ++j) {
    worst = std::max(worst, lp.lower_of(j) - x[j]);
    worst = std::max(worst, x[j] - lp.upper_of(j));
  }
  return worst;
}

bool verify_farkas(const LinearProgram& lp, const std::vector<double>& y,
                   double tol) {
  if (y.size() != lp.rows.size()) return false;
  const int nv = lp.num_vars();
  std::vector<double> v(nv, 0.0);
  double rhs = 0.0;
  for (size_t r = 0; r < y.size(); ++r) {
    const auto& row = lp.rows[r];
    if (row.rel == Rel::kLe && y[r] > tol) return false;
    if (row.rel == Rel::kGe && y[r] < -tol) return false;
    for (int j = 0; j < nv && j < static_cast<int>(row.coef.size()); ++j)
      v[j] += y[r] * row.coef[j];
    rhs += y[r] * row.rhs;
  }
  double sup = 0.0;
  for (int j = 0; j < nv; ++j) {
    if (std::fabs(v[j]) <= tol) continue;
    const double bound = v[j] > 0 ? lp.upper_of(j) : lp.lower_of(j);
    if (!std::isfinite(bound)) return false;
    sup += v[j] * bound;
  }
  return sup < rhs - tol;
}

long ellipsoid_budget(int dim, double radius, double tol) {
  const double d = std::max(1, dim);
  const double l = std::log(std::max(radius / tol, 1.0 + 1e-12));
  return static_cast<long>(std::ceil(2.0 * d * d * l));
}

EllipsoidResult ellipsoid_feasibility(int dim, double radius,
                                      const SeparationOracle& oracle,
                                      long max_iters, double tol,
                                      const std::vector<double>& center) {
  EllipsoidResult res;
  const int d = dim;
  std::vector<double> c = center.empty() ? std::vector<double>(d, 0.0) : center;
  std::vector<double> P(static_cast<size_t>(d) * d, 0.0);
  for (int i = 0; i < d; ++i) P[static_cast<size_t>(i) * d + i] = radius * radius;
  double logdet = 2.0 * d * std::log(radius);
  const double target = 2.0 * d * std::log(tol);
  if (max_iters <= 0) max_iters = ellipsoid_budget(d, radius, tol);
  const double dd = static_cast<double>(d);
  const double step_logdet =
      d == 1 ? 2.0 * std::log(0.5)
             : dd * std::log(dd * dd / (dd * dd - 1.0)) + std::log((dd - 1.0) / (dd + 1.0));
  std::vector<double> g(d);
  for (long it = 0;; ++it) {
    res.iterations = it;
    auto cut = oracle(c);
    if (!cut) {
      res.status = EllipsoidStatus::kPoint;
      res.point = c;
      return res;
    }
    res.history.push_back(*cut);
    if (logdet < target) {
      res.status = EllipsoidStatus::kEmpty;
      return res;
    }
    if (it >= max_iters) {
      res.status = EllipsoidStatus::kIndeterminate;
      res.point = c;
      return res;
    }
    const auto& a = cut->a;
    for (int i = 0; i < d; ++i) {
      double s = 0.0;
      const double* row = &P[static_cast<size_t>(i) * d];
      for (int j = 0; j < d; ++j) s += row[j] * a[j];
      g[i] = s;
    }
    double aPa = 0.0;
    for (int i = 0; i < d; ++i) aPa += a[i] * g[i];
    if (!(aPa > 1e-300)) {
      res.status = EllipsoidStatus::kEmpty;
      return res;
    }
    const double inv = 1.0 / std::sqrt(aPa);
    for (int i = 0; i < d; ++i) g[i] *= inv;
    if (d == 1) {
      c[0] -= 0.5 * g[0];
      P[0] *= 0.25;
    } else {
      for (int i = 0; i < d; ++i) c[i] -= g[i] / (dd + 1.0);
      const double f = dd * dd / (dd * dd - 1.0);
      const double h = 2.0 / (dd + 1.0);
      for (int i = 0; i < d; ++i) {
        double* row = &P[static_cast<size_t>(i) * d];
        for (int j = i; j < d; ++j) {
          const double v = f * (row[j] - h * g[i] * g[j]);
          row[j] = v;
          P[static_cast<size_t>(j) * d + i] = v;
        }
      }
    }
    logdet += step_logdet;
  }
}

SeparationOracle make_explicit_oracle(std::vector<Cut> cuts, double tol) {
  return [cuts = std::move(cuts), tol](const std::vector<double>& x) -> std::optional<Cut> {
    const Cut* worst = nullptr;
    double wv = tol;
    for (const auto& cut : cuts) {
      double s = -cut.b;
      for (size_t j = 0; j < cut.a.size(); ++j) s += cut.a[j] * x[j];
      double norm = 0.0;
      for (double v : cut.a) norm += v * v;
      norm = std::sqrt(std::max(norm, 1e-300));
      if (s / norm > wv) {
        wv = s / norm;
        worst = &cut;
      }
    }
    if (!worst) return std::nullopt;
    return *worst;
  };
}

std::vector<Cut> lp_to_cuts(const LinearProgram& lp) {
  std::vector<Cut> cuts;
  const int nv = lp.num_vars();
  for (size_t r = 0; r < lp.rows.size(); ++r) {
    const auto& row = lp.rows[r];
    std::vector<double> a(row.coef);
    a.resize(nv, 0.0);
    const std::string tag = "row" + std::to_string(r);
    if (row.rel != Rel::kGe) cuts.push_back({a, row.rhs, tag});
    if (row.rel != Rel::kLe) {
      std::vector<double> na(a);
      for (double& v : na) v = -v;
      cuts.push_back({na, -row.rhs, tag});
    }
  }
  for (int j = 0; j < nv; ++j) {
    if (std::isfinite(lp.lower_of(j))) {
      std::vector<double> a(nv, 0.0);
      a[j] = -1.0;
      cuts.push_back({a, -lp.lower_of(j), "lb" + std::to_string(j)});
    }
    if (std::isfinite(lp.upper_of(j))) {
      std::vector<double> a(nv, 0.0);
      a[j] = 1.0;
      cuts.push_back({a, lp.upper_of(j), "ub" + std::to_string(j)});
    }
  }
  return cuts;
}

}  // namespace pma
