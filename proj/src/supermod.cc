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

#include "supermod.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "error.hpp"
#include "rewards.hpp"
#include "rng.hpp"

namespace pma {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

// Solves A z = b in place by Gaussian elimination with partial pivoting.
bool solve_dense(std::vector<std::vector<double>> A, std::vector<double> b, std::vector<double>& z) {
  const int n = static_cast<int>(b.size());
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::fabs(A[r][c]) > std::fabs(A[piv][c])) piv = r;
    if (std::fabs(A[piv][c]) < 1e-14) return false;
    std::swap(A[c], A[piv]);
    std::swap(b[c], b[piv]);
    for (int r = c + 1; r < n; ++r) {
      const double f = A[r][c] / A[c][c];
      if (f == 0.0) continue;
      for (int k = c; k < n; ++k) A[r][k] -= f * A[c][k];
      b[r] -= f * b[c];
    }
  }
  z.assign(n, 0.0);
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int k = r + 1; k < n; ++k) s -= A[r][k] * z[k];
    z[r] = s / A[r][r];
  }
  return true;
}

// Coefficients of the minimum-norm point in the affine hull of Q.
bool affine_minimizer(const std::vector<std::vector<double>>& Q, std::vector<double>& alpha) {
  const int k = static_cast<int>(Q.size());
  std::vector<std::vector<double>> A(k + 1, std::vector<double>(k + 1, 0.0));
  double diag = 0.0;
  for (int a = 0; a < k; ++a)
    for (int b = 0; b <= a; ++b) {
      A[a][b] = A[b][a] = dot(Q[a], Q[b]);
      if (a == b) diag = std::max(diag, A[a][a]);
    }
  for (int a = 0; a < k; ++a) {
    A[a][a] += 1e-13 * (1.0 + diag);
    A[a][k] = A[k][a] = 1.0;
  }
  std::vector<double> rhs(k + 1, 0.0), z;
  rhs[k] = 1.0;
  if (!solve_dense(A, rhs, z)) return false;
  alpha.assign(z.begin(), z.begin() + k);
  return true;
}

std::vector<double> combine(const std::vector<std::vector<double>>& Q, const std::vector<double>& lam) {
  std::vector<double> x(Q[0].size(), 0.0);
  for (size_t j = 0; j < Q.size(); ++j)
    for (size_t e = 0; e < x.size(); ++e) x[e] += lam[j] * Q[j][e];
  return x;
}

}  // namespace

SfmResult sfm_min_norm(const SetFunction& f, int ground_size, double tol, int max_iterations) {
  const int N = ground_size;
  SfmResult r;
  std::vector<bool> empty(N, false);
  const double f0 = f(empty);
  r.set = empty;
  r.value = f0;
  if (N == 0) return r;

  auto greedy = [&](const std::vector<double>& x) {
    std::vector<int> ord(N);
    std::iota(ord.begin(), ord.end(), 0);
    std::stable_sort(ord.begin(), ord.end(), [&](int a, int b) { return x[a] < x[b]; });
    std::vector<bool> s(N, false);
    std::vector<double> q(N);
    double prev = f0;
    for (int k = 0; k < N; ++k) {
      s[ord[k]] = true;
      const double v = f(s);
      q[ord[k]] = v - prev;
      prev = v;
    }
    return q;
  };

  std::vector<std::vector<double>> Q{greedy(std::vector<double>(N, 0.0))};
  std::vector<double> lam{1.0};
  std::vector<double> x = Q[0];
  double scale = 1.0;
  for (double v : Q[0]) scale = std::max(scale, std::fabs(v));

  int it = 0;
  r.converged = false;
  for (; it < max_iterations; ++it) {
    const auto q = greedy(x);
    for (double v : q) scale = std::max(scale, std::fabs(v));
    const double gap = dot(x, x) - dot(x, q);
    if (gap <= tol * scale * scale) {
      r.converged = true;
      break;
    }
    bool repeated = false;
    for (const auto& p : Q) {
      double d = 0.0;
      for (int e = 0; e < N; ++e) d = std::max(d, std::fabs(p[e] - q[e]));
      if (d <= 1e-12 * scale) repeated = true;
    }
    if (repeated) {
      r.converged = true;
      break;
    }
    Q.push_back(q);
    lam.push_back(0.0);
    // Minor cycle.
    for (int guard = 0; guard <= N + 2; ++guard) {
      std::vector<double> alpha;
      if (!affine_minimizer(Q, alpha)) break;
      const double eps = 1e-12;
      bool interior = true;
      for (double a : alpha)
        if (a <= eps) interior = false;
      if (interior) {
        lam = alpha;
        break;
      }
      double theta = 1.0;
      for (size_t j = 0; j < alpha.size(); ++j)
        if (alpha[j] <= eps && lam[j] - alpha[j] > 0) theta = std::min(theta, lam[j] / (lam[j] - alpha[j]));
      for (size_t j = 0; j < lam.size(); ++j) lam[j] = theta * alpha[j] + (1.0 - theta) * lam[j];
      std::vector<std::vector<double>> Q2;
      std::vector<double> lam2;
      double keep_max = -1.0;
      size_t keep_idx = 0;
      for (size_t j = 0; j < lam.size(); ++j) {
        if (lam[j] > keep_max) {
          keep_max = lam[j];
          keep_idx = j;
        }
        if (lam[j] > eps) {
          Q2.push_back(Q[j]);
          lam2.push_back(lam[j]);
        }
      }
      if (Q2.empty()) {
        Q2.push_back(Q[keep_idx]);
        lam2.push_back(1.0);
      }
      const double s = std::accumulate(lam2.begin(), lam2.end(), 0.0);
      for (double& v : lam2) v /= s;
      Q.swap(Q2);
      lam.swap(lam2);
    }
    x = combine(Q, lam);
  }
  r.iterations = it;
  r.min_norm_point = x;

  // Best level set of x.
  std::vector<int> ord(N);
  std::iota(ord.begin(), ord.end(), 0);
  std::stable_sort(ord.begin(), ord.end(), [&](int a, int b) { return x[a] < x[b]; });
  std::vector<bool> s(N, false);
  for (int k = 0; k < N; ++k) {
    s[ord[k]] = true;
    const double v = f(s);
    if (v < r.value - 1e-12) {
      r.value = v;
      r.set = s;
    }
  }
  return r;
}

std::vector<std::vector<int>> lattice_chains(const PartitionProblem& pp) {
  std::vector<std::vector<int>> chains(pp.n());
  for (int i = 0; i < pp.n(); ++i) {
    std::vector<int> acts;
    for (const auto& e : pp.parts[i]) acts.push_back(e.action);
    chains[i] = canonical_order(*pp.inst, i, acts);
  }
  return chains;
}

std::vector<int> ThresholdEncoding::levels(const std::vector<bool>& set) const {
  std::vector<int> lv(chains.size(), 0);
  std::vector<std::vector<bool>> has(chains.size());
  for (size_t i = 0; i < chains.size(); ++i) has[i].assign(chains[i].size(), false);
  for (size_t e = 0; e < elements.size(); ++e)
    if (set[e]) has[elements[e].first][elements[e].second] = true;
  for (size_t i = 0; i < chains.size(); ++i)
    while (lv[i] + 1 < static_cast<int>(chains[i].size()) && has[i][lv[i] + 1]) ++lv[i];
  return lv;
}

int ThresholdEncoding::violations(const std::vector<bool>& set) const {
  const auto lv = levels(set);
  int count = 0;
  for (size_t e = 0; e < elements.size(); ++e)
    if (set[e] && elements[e].second > lv[elements[e].first]) ++count;
  return count;
}

std::vector<int> ThresholdEncoding::profile(const std::vector<int>& lv) const {
  std::vector<int> p(chains.size());
  for (size_t i = 0; i < chains.size(); ++i) p[i] = chains[i][lv[i]];
  return p;
}

ThresholdEncoding make_encoding(const PartitionProblem& pp) {
  ThresholdEncoding enc;
  enc.chains = lattice_chains(pp);
  double top_weight = 0.0;
  for (int i = 0; i < pp.n(); ++i) {
    for (int t = 1; t < static_cast<int>(enc.chains[i].size()); ++t) enc.elements.push_back({i, t});
    double w = 0.0;
    for (const auto& e : pp.parts[i]) w = std::max(w, std::fabs(e.weight));
    top_weight += w;
  }
  const double reward_top = std::max(1.0, pp.reward_scale * pp.inst->reward_bound);
  enc.penalty = 4.0 * (reward_top + pp.n() + top_weight);
  return enc;
}

double encoded_value(const PartitionProblem& pp, const ThresholdEncoding& enc, const std::vector<bool>& set) {
  const auto lv = enc.levels(set);
  return -f_value(pp, enc.profile(lv)) + enc.penalty * enc.violations(set);
}

MatroidSolution solve_ir_fosd(const PartitionProblem& pp, const IrFosdOptions& opt) {
  const auto chains = lattice_chains(pp);
  if (opt.verify_fosd) {
    const auto v = check_fosd(*pp.inst, &chains);
    for (const auto& pr : v.pairs) {
      if (pr.pass) continue;
      std::ostringstream msg;
      msg << "FOSD fails for agent " << pr.agent << " between actions " << pr.lower << " and " << pr.upper
          << "; violating comprehensive set {";
      for (size_t k = 0; k < pr.witness_set.size(); ++k) msg << (k ? "," : "") << pr.witness_set[k];
      msg << "}";
      throw Error(ErrorCode::kRefusal, msg.str());
    }
  }
  if (opt.verify_reward) {
    PropertyOptions po;
    PropertyVerdict pv;
    try {
      pv = check_property(pp.inst->reward, *pp.inst, Property::kIrSupermodular, po);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kRefusal) throw;
      po.exhaustive = false;
      pv = check_property(pp.inst->reward, *pp.inst, Property::kIrSupermodular, po);
    }
    if (!pv.pass) throw Error(ErrorCode::kRefusal, "reward is not IR-supermodular");
  }
  const auto enc = make_encoding(pp);
  const auto sfm = sfm_min_norm([&](const std::vector<bool>& s) { return encoded_value(pp, enc, s); },
                                enc.size(), opt.sfm_tol);
  if (!sfm.converged) throw Error(ErrorCode::kNumerical, "minimum-norm point did not converge");
  return finish_solution(pp, enc.profile(enc.levels(sfm.set)));
}

OrderedVerdict check_ordered_supermodular(const PartitionProblem& pp, bool exhaustive, long cap, long trials,
                                          uint64_t seed, double tol) {
  const auto chains = lattice_chains(pp);
  const int n = pp.n();
  OrderedVerdict v;
  auto h = [&](const std::vector<int>& lv) {
    std::vector<int> p(n);
    for (int i = 0; i < n; ++i) p[i] = chains[i][lv[i]];
    return f_value(pp, p);
  };
  auto probe = [&](const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> lo(n), hi(n);
    for (int i = 0; i < n; ++i) {
      lo[i] = std::min(a[i], b[i]);
      hi[i] = std::max(a[i], b[i]);
    }
    ++v.checked;
    const double gap = h(a) + h(b) - h(lo) - h(hi);
    if (gap > tol && gap > v.violation) {
      v.pass = false;
      v.violation = gap;
      v.witness_a.resize(n);
      v.witness_b.resize(n);
      for (int i = 0; i < n; ++i) {
        v.witness_a[i] = chains[i][a[i]];
        v.witness_b[i] = chains[i][b[i]];
      }
    }
  };
  std::vector<std::vector<int>> points;
  double total = 1.0;
  for (const auto& c : chains) total *= static_cast<double>(c.size());
  if (exhaustive) {
    if (total * (total + 1) / 2 > static_cast<double>(cap))
      throw Error(ErrorCode::kRefusal, "ordered-supermodularity check exceeds the cap");
    std::vector<int> lv(n, 0);
    while (true) {
      points.push_back(lv);
      int k = n - 1;
      while (k >= 0 && ++lv[k] == static_cast<int>(chains[k].size())) lv[k--] = 0;
      if (k < 0) break;
    }
    for (size_t a = 0; a < points.size(); ++a)
      for (size_t b = a + 1; b < points.size(); ++b) probe(points[a], points[b]);
  } else {
    Rng rng(seed);
    std::vector<int> a(n), b(n);
    for (long t = 0; t < trials; ++t) {
      for (int i = 0; i < n; ++i) {
        a[i] = rng.below_int(static_cast<int>(chains[i].size()));
        b[i] = rng.below_int(static_cast<int>(chains[i].size()));
      }
      probe(a, b);
    }
  }
  return v;
}

}  // namespace pma
