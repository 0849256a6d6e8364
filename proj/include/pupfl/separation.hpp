// Copyright 2026 The pupfl Authors
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

// Benders cuts for one customer at a binary leader decision.
//
// For fixed x the customer subproblem is
//
//   min  sum_j c_j y_j
//   s.t. sum_j y_j = 1                                  (mu)
//        y_j <= x_j                                     (lambda_j >= 0)
//        sum_k pi_k y_k <= (pi_j - 1) x_j + 1           (v_j >= 0)
//        y >= 0
//
// and its dual is
//
//   max  mu - sum_j v_j + sum_j (v_j - pi_j v_j - lambda_j) x_j
//   s.t. c_j - mu + lambda_j + pi_j sum_k v_k >= 0.
//
// Any dual-feasible triple gives the affine bound
// w >= (mu - sum v) + sum_j (v_j (1 - pi_j) - lambda_j) x_j, valid for all x.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iostream>
#include <numeric>
#include <span>
#include <vector>

#include "pupfl/follower.hpp"
#include "pupfl/instance.hpp"
#include "pupfl/lp.hpp"

namespace pupfl {

struct DualTriple {
  std::size_t customer = 0;
  double mu = 0.0;
  std::vector<double> lambda;
  std::vector<double> v;
};

enum class CutOrigin { kAnalytic, kLp };

inline const char* to_string(CutOrigin o) { return o == CutOrigin::kAnalytic ? "analytic" : "lp"; }

struct BendersCut {
  std::size_t customer = 0;
  double constant = 0.0;
  std::vector<double> coeff;
  CutOrigin origin = CutOrigin::kAnalytic;

  double value(std::span<const double> x) const {
    double s = constant;
    for (std::size_t j = 0; j < coeff.size(); ++j) s += coeff[j] * x[j];
    return s;
  }
};

// Dual objective of the customer subproblem at x.
inline double dual_objective(const DualTriple& d, const Instance& inst, std::span<const double> x) {
  const auto pi = inst.pi.row(d.customer);
  double s = d.mu;
  for (std::size_t j = 0; j < inst.n_facilities; ++j) {
    s += -d.v[j] + (d.v[j] - pi[j] * d.v[j] - d.lambda[j]) * x[j];
  }
  return s;
}

// Largest violation of the dual constraints, including sign restrictions.
// Zero means feasible.
inline double dual_infeasibility(const DualTriple& d, const Instance& inst) {
  const auto pi = inst.pi.row(d.customer);
  const auto c = inst.cost.row(d.customer);
  const double vsum = std::accumulate(d.v.begin(), d.v.end(), 0.0);
  double worst = 0.0;
  for (std::size_t j = 0; j < inst.n_facilities; ++j) {
    worst = std::max(worst, -(c[j] - d.mu + d.lambda[j] + pi[j] * vsum));
    worst = std::max(worst, -d.lambda[j]);
    worst = std::max(worst, -d.v[j]);
  }
  return worst;
}

namespace detail {

inline void check_decision(const Instance& inst, const LeaderDecision& x, std::size_t i) {
  if (x.empty()) throw InstanceError("separation: empty open set");
  if (i >= inst.n_customers) throw InstanceError("separation: customer index out of range");
}

}  // namespace detail

// Solves the dual subproblem with the simplex kernel.
inline DualTriple lp_duals_oracle(const Instance& inst, const LeaderDecision& x, std::size_t i) {
  detail::check_decision(inst, x, i);
  const std::size_t nj = inst.n_facilities;
  const auto pi = inst.pi.row(i);
  const auto c = inst.cost.row(i);
  // Variables: mu, lambda_0..lambda_{J-1}, v_0..v_{J-1}. Minimize the negated
  // dual objective.
  LpProblem lp;
  lp.add_variable(-1.0, -kInf, kInf, "mu");
  for (std::size_t j = 0; j < nj; ++j) {
    lp.add_variable(x.is_open(static_cast<int>(j)) ? 1.0 : 0.0, 0.0, kInf);
  }
  for (std::size_t j = 0; j < nj; ++j) {
    const double xj = x.is_open(static_cast<int>(j)) ? 1.0 : 0.0;
    lp.add_variable(1.0 - (1.0 - pi[j]) * xj, 0.0, kInf);
  }
  for (std::size_t j = 0; j < nj; ++j) {
    std::vector<double> row(1 + 2 * nj, 0.0);
    row[0] = -1.0;
    row[1 + j] = 1.0;
    for (std::size_t k = 0; k < nj; ++k) row[1 + nj + k] = pi[j];
    lp.add_row(std::move(row), Relation::kGreaterEqual, -c[j]);
  }
  const LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::kOptimal) {
    throw LpError(std::string("dual subproblem ended ") + to_string(sol.status) + " for customer " +
                  std::to_string(i));
  }
  DualTriple d;
  d.customer = i;
  d.mu = sol.x[0];
  d.lambda.assign(sol.x.begin() + 1, sol.x.begin() + 1 + static_cast<std::ptrdiff_t>(nj));
  d.v.assign(sol.x.begin() + 1 + static_cast<std::ptrdiff_t>(nj), sol.x.end());
  // Clip round-off below the nonnegativity bounds.
  for (auto& t : d.lambda) t = std::max(t, 0.0);
  for (auto& t : d.v) t = std::max(t, 0.0);
  return d;
}

// Closed-form optimal dual at a binary point: only v_m is nonzero, where m
// is the customer's chosen facility, and lambda is nonzero only on closed
// facilities. Falls back to the LP oracle if two open preferences collide
// in floating point.
inline DualTriple analytic_duals(const Instance& inst, const LeaderDecision& x, std::size_t i) {
  detail::check_decision(inst, x, i);
  const std::size_t nj = inst.n_facilities;
  const auto pi = inst.pi.row(i);
  const auto c = inst.cost.row(i);
  const int m = most_preferred(inst, x, i);
  double vm = 0.0;
  for (int j : x.open()) {
    if (j == m) continue;
    const double denom = pi[m] - pi[j];
    if (std::abs(denom) < 1e-15) {
      std::clog << "pupfl: warning: degenerate preferences for customer " << i << " in '"
                << inst.name << "', using the LP dual\n";
      return lp_duals_oracle(inst, x, i);
    }
    vm = std::max(vm, (c[j] - c[m]) / denom);
  }
  DualTriple d;
  d.customer = i;
  d.v.assign(nj, 0.0);
  d.v[m] = vm;
  d.mu = c[m] + pi[m] * vm;
  d.lambda.assign(nj, 0.0);
  for (std::size_t j = 0; j < nj; ++j) {
    if (!x.is_open(static_cast<int>(j))) d.lambda[j] = std::max(0.0, d.mu - c[j] - pi[j] * vm);
  }
  return d;
}

inline BendersCut cut_from_duals(const DualTriple& d, const Instance& inst,
                                 CutOrigin origin = CutOrigin::kAnalytic) {
  const auto pi = inst.pi.row(d.customer);
  BendersCut cut;
  cut.customer = d.customer;
  cut.origin = origin;
  cut.constant = d.mu - std::accumulate(d.v.begin(), d.v.end(), 0.0);
  cut.coeff.resize(inst.n_facilities);
  for (std::size_t j = 0; j < inst.n_facilities; ++j) {
    cut.coeff[j] = d.v[j] - pi[j] * d.v[j] - d.lambda[j];
  }
  return cut;
}

// Violation of the cut at (x, w) relative to |w|, with |w| < 1 treated as 1.
// Positive means the point violates the cut.
inline double relative_violation(const BendersCut& cut, std::span<const double> x, double w) {
  return (cut.value(x) - w) / std::max(std::abs(w), 1.0);
}

}  // namespace pupfl
