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

// Dense bounded-variable simplex.
//
// Every row r is turned into an equality a_r x + s_r = b_r with a slack s_r
// whose bounds encode the relation: [0, inf) for <=, (-inf, 0] for >=,
// [0, 0] for =. The solver keeps the full tableau B^-1 [A I] together with
// B^-1 b and the reduced-cost row, so that
//   * a cold solve runs a composite phase 1 (minimize the sum of bound
//     violations of the basic variables) followed by a primal phase 2,
//   * bound changes and appended rows keep the current basis dual feasible
//     and are reoptimized with the dual simplex.
// The second property is what the branch-and-cut engine relies on: one
// tableau lives through the whole tree and every node is a warm start.
//
// Pricing is Dantzig's largest reduced cost; after `stall_threshold`
// consecutive degenerate pivots both the primal and the dual method switch
// to Bland's smallest-index rule until progress resumes.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pupfl {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

class LpError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Relation { kLessEqual, kEqual, kGreaterEqual };

struct LpRow {
  std::vector<double> coeffs;
  Relation relation = Relation::kLessEqual;
  double rhs = 0.0;
  std::string name;
};

// min objective . x  subject to rows and lower <= x <= upper.
struct LpProblem {
  std::vector<double> objective;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<LpRow> rows;
  std::vector<std::string> var_names;

  std::size_t num_vars() const { return objective.size(); }
  std::size_t num_rows() const { return rows.size(); }

  std::size_t add_variable(double cost, double lo, double hi, std::string name = {}) {
    objective.push_back(cost);
    lower.push_back(lo);
    upper.push_back(hi);
    var_names.push_back(std::move(name));
    for (auto& r : rows) r.coeffs.push_back(0.0);
    return objective.size() - 1;
  }

  std::size_t add_row(std::vector<double> coeffs, Relation rel, double rhs,
                      std::string name = {}) {
    if (coeffs.size() > num_vars()) throw LpError("row has more coefficients than variables");
    coeffs.resize(num_vars(), 0.0);
    rows.push_back(LpRow{std::move(coeffs), rel, rhs, std::move(name)});
    return rows.size() - 1;
  }

  void check() const {
    const std::size_t n = num_vars();
    if (lower.size() != n || upper.size() != n) throw LpError("bound vectors have wrong size");
    for (std::size_t j = 0; j < n; ++j) {
      if (std::isnan(lower[j]) || std::isnan(upper[j]) || lower[j] > upper[j]) {
        throw LpError("variable " + std::to_string(j) + " has inconsistent bounds");
      }
      if (lower[j] == kInf || upper[j] == -kInf) {
        throw LpError("variable " + std::to_string(j) + " has an infinite bound on the wrong side");
      }
    }
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].coeffs.size() != n) {
        throw LpError("row " + std::to_string(r) + " has " +
                      std::to_string(rows[r].coeffs.size()) + " coefficients, expected " +
                      std::to_string(n));
      }
      if (!std::isfinite(rows[r].rhs)) throw LpError("row " + std::to_string(r) + " has a non-finite rhs");
    }
  }
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

inline const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
    case LpStatus::kIterationLimit: return "iteration_limit";
  }
  return "unknown";
}

struct LpSolution {
  LpStatus status = LpStatus::kIterationLimit;
  std::vector<double> x;
  double objective = 0.0;
  // Row duals y with objective = y . rhs + sum_j reduced_costs[j] * x[j].
  std::vector<double> duals;
  std::vector<double> reduced_costs;
  long iterations = 0;
};

struct SimplexOptions {
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-9;
  double pivot_tol = 1e-9;
  long max_iterations = 0;  // 0: 20 * (rows + columns) + 10000
  int stall_threshold = 50;
  int refactor_interval = 0;  // 0: max(200, 2 * rows)
};

class SimplexSolver {
 public:
  explicit SimplexSolver(const LpProblem& problem, SimplexOptions options = {})
      : options_(options) {
    problem.check();
    n_ = problem.num_vars();
    cost_ = problem.objective;
    lo_ = problem.lower;
    hi_ = problem.upper;
    for (const auto& r : problem.rows) append_original_row(r);
    cost_.resize(n_ + m_, 0.0);
    reset_to_slack_basis();
  }

  std::size_t num_vars() const { return n_; }
  std::size_t num_rows() const { return m_; }
  long iterations() const { return iterations_; }
  LpStatus status() const { return status_; }

  // Cold start: slack basis, phase 1, phase 2.
  LpStatus solve() {
    reset_to_slack_basis();
    return run_primal();
  }

  // Warm start from the current basis. Uses the dual simplex when the basis
  // is dual feasible, the primal method otherwise. A failing warm start is
  // retried cold.
  LpStatus reoptimize() {
    LpStatus s;
    compute_reduced_costs(cost_);
    if (dual_feasible()) {
      s = run_dual();
    } else {
      s = run_primal();
    }
    if (s == LpStatus::kIterationLimit) s = solve();
    return s;
  }

  // With refresh = false the basic values are left stale; call
  // refresh_primal() once after a batch of changes.
  void set_bounds(std::size_t var, double lo, double hi, bool refresh = true) {
    if (var >= n_) throw LpError("set_bounds: variable index out of range");
    if (lo > hi) throw LpError("set_bounds: lower above upper");
    lo_[var] = lo;
    hi_[var] = hi;
    if (state_[var] != VarState::kBasic) {
      place_nonbasic(var);
      if (refresh) compute_primal();
    }
    status_ = LpStatus::kIterationLimit;
  }

  void refresh_primal() { compute_primal(); }

  double lower(std::size_t var) const { return lo_[var]; }
  double upper(std::size_t var) const { return hi_[var]; }

  // Appends a row; the new slack enters the basis so dual feasibility is
  // preserved. Call reoptimize() afterwards.
  std::size_t add_row(const LpRow& row) {
    if (row.coeffs.size() != n_) throw LpError("add_row: wrong number of coefficients");
    const std::size_t total = n_ + m_;
    for (auto& t : tableau_) t.push_back(0.0);
    std::vector<double> fresh(total + 1, 0.0);
    std::copy(row.coeffs.begin(), row.coeffs.end(), fresh.begin());
    fresh[total] = 1.0;
    double rhs = row.rhs;
    for (std::size_t k = 0; k < m_; ++k) {
      const std::size_t v = basis_[k];
      if (v >= n_) continue;
      const double a = row.coeffs[v];
      if (a == 0.0) continue;
      const auto& tk = tableau_[k];
      for (std::size_t j = 0; j < total; ++j) {
        if (tk[j] != 0.0) fresh[j] -= a * tk[j];
      }
      rhs -= a * rhs_[k];
    }
    for (auto& v : fresh) {
      if (std::abs(v) < kDropTol) v = 0.0;
    }
    append_original_row(row);
    cost_.push_back(0.0);
    tableau_.push_back(std::move(fresh));
    rhs_.push_back(rhs);
    basis_.push_back(total);
    state_.push_back(VarState::kBasic);
    x_.push_back(0.0);
    d_.push_back(0.0);
    compute_primal();
    status_ = LpStatus::kIterationLimit;
    return m_ - 1;
  }

  double objective() const {
    double z = 0.0;
    for (std::size_t j = 0; j < n_; ++j) z += cost_[j] * x_[j];
    return z;
  }

  std::span<const double> values() const { return {x_.data(), n_}; }

  LpSolution solution() const {
    LpSolution s;
    s.status = status_;
    s.iterations = iterations_;
    s.x.assign(x_.begin(), x_.begin() + static_cast<std::ptrdiff_t>(n_));
    s.objective = objective();
    s.duals.resize(m_);
    for (std::size_t r = 0; r < m_; ++r) s.duals[r] = -d_[n_ + r];
    s.reduced_costs.assign(d_.begin(), d_.begin() + static_cast<std::ptrdiff_t>(n_));
    return s;
  }

 private:
  enum class VarState : std::uint8_t { kBasic, kAtLower, kAtUpper, kAtZero };
  static constexpr double kDropTol = 1e-12;

  void append_original_row(const LpRow& r) {
    rows_.push_back(r.coeffs);
    b_.push_back(r.rhs);
    switch (r.relation) {
      case Relation::kLessEqual: lo_.push_back(0.0); hi_.push_back(kInf); break;
      case Relation::kGreaterEqual: lo_.push_back(-kInf); hi_.push_back(0.0); break;
      case Relation::kEqual: lo_.push_back(0.0); hi_.push_back(0.0); break;
    }
    ++m_;
  }

  std::size_t total() const { return n_ + m_; }

  long iteration_cap() const {
    if (options_.max_iterations > 0) return options_.max_iterations;
    return 20 * static_cast<long>(n_ + m_) + 10000;
  }

  int refactor_interval() const {
    if (options_.refactor_interval > 0) return options_.refactor_interval;
    return static_cast<int>(std::max<std::size_t>(200, 2 * m_));
  }

  double nonbasic_value(std::size_t j) const {
    switch (state_[j]) {
      case VarState::kAtLower: return lo_[j];
      case VarState::kAtUpper: return hi_[j];
      default: return 0.0;
    }
  }

  // Chooses the resting bound of a nonbasic variable. Boxed variables follow
  // the sign of their reduced cost so that the basis stays dual feasible.
  void place_nonbasic(std::size_t j) {
    const bool lo_fin = std::isfinite(lo_[j]);
    const bool hi_fin = std::isfinite(hi_[j]);
    if (lo_fin && hi_fin) {
      if (lo_[j] == hi_[j]) {
        state_[j] = VarState::kAtLower;
      } else {
        state_[j] = d_[j] < 0.0 ? VarState::kAtUpper : VarState::kAtLower;
      }
    } else if (lo_fin) {
      state_[j] = VarState::kAtLower;
    } else if (hi_fin) {
      state_[j] = VarState::kAtUpper;
    } else {
      state_[j] = VarState::kAtZero;
    }
    x_[j] = nonbasic_value(j);
  }

  void reset_to_slack_basis() {
    const std::size_t nt = total();
    tableau_.assign(m_, std::vector<double>(nt, 0.0));
    rhs_ = b_;
    basis_.resize(m_);
    state_.assign(nt, VarState::kAtLower);
    x_.assign(nt, 0.0);
    d_.assign(nt, 0.0);
    for (std::size_t r = 0; r < m_; ++r) {
      std::copy(rows_[r].begin(), rows_[r].end(), tableau_[r].begin());
      tableau_[r][n_ + r] = 1.0;
      basis_[r] = n_ + r;
      state_[n_ + r] = VarState::kBasic;
    }
    for (std::size_t j = 0; j < n_; ++j) {
      state_[j] = VarState::kAtLower;
      place_nonbasic(j);
    }
    pivots_since_refactor_ = 0;
    compute_primal();
  }

  // Rebuilds B^-1 [A I] from the original rows for the current basis.
  bool refactor() {
    const std::size_t nt = total();
    std::vector<std::vector<double>> t(m_, std::vector<double>(nt, 0.0));
    std::vector<double> rhs = b_;
    for (std::size_t r = 0; r < m_; ++r) {
      std::copy(rows_[r].begin(), rows_[r].end(), t[r].begin());
      t[r][n_ + r] = 1.0;
    }
    std::vector<char> assigned(m_, 0);
    std::vector<std::size_t> new_basis(m_);
    // Slacks first: their columns are unit vectors and pivot trivially.
    std::vector<std::size_t> order = basis_;
    std::stable_partition(order.begin(), order.end(), [&](std::size_t v) { return v >= n_; });
    for (std::size_t v : order) {
      std::size_t best = m_;
      double best_abs = 0.0;
      for (std::size_t r = 0; r < m_; ++r) {
        if (assigned[r]) continue;
        const double a = std::abs(t[r][v]);
        if (a > best_abs) {
          best_abs = a;
          best = r;
        }
      }
      if (best == m_ || best_abs < 1e-9) return false;
      assigned[best] = 1;
      new_basis[best] = v;
      gauss_jordan(t, rhs, best, v, nullptr);
    }
    tableau_ = std::move(t);
    rhs_ = std::move(rhs);
    basis_ = std::move(new_basis);
    pivots_since_refactor_ = 0;
    compute_primal();
    return true;
  }

  static void gauss_jordan(std::vector<std::vector<double>>& t, std::vector<double>& rhs,
                           std::size_t r, std::size_t q, std::vector<double>* d) {
    auto& pr = t[r];
    const double inv = 1.0 / pr[q];
    std::vector<std::size_t> nz;
    nz.reserve(pr.size());
    for (std::size_t j = 0; j < pr.size(); ++j) {
      if (pr[j] != 0.0) {
        pr[j] *= inv;
        nz.push_back(j);
      }
    }
    pr[q] = 1.0;
    rhs[r] *= inv;
    for (std::size_t k = 0; k < t.size(); ++k) {
      if (k == r) continue;
      auto& row = t[k];
      const double f = row[q];
      if (f == 0.0) continue;
      for (std::size_t j : nz) {
        double v = row[j] - f * pr[j];
        row[j] = std::abs(v) < kDropTol ? 0.0 : v;
      }
      row[q] = 0.0;
      rhs[k] -= f * rhs[r];
    }
    if (d != nullptr) {
      auto& dv = *d;
      const double f = dv[q];
      if (f != 0.0) {
        for (std::size_t j : nz) dv[j] -= f * pr[j];
        dv[q] = 0.0;
      }
    }
  }

  void pivot(std::size_t r, std::size_t q, VarState leaving_state) {
    const std::size_t leaving = basis_[r];
    gauss_jordan(tableau_, rhs_, r, q, &d_);
    basis_[r] = q;
    state_[q] = VarState::kBasic;
    state_[leaving] = leaving_state;
    x_[leaving] = nonbasic_value(leaving);
    ++iterations_;
    if (++pivots_since_refactor_ >= refactor_interval()) {
      if (!refactor()) reset_to_slack_basis();
      compute_reduced_costs(active_cost_);
    }
    compute_primal();
  }

  void compute_primal() {
    std::vector<std::pair<std::size_t, double>> active;
    const std::size_t nt = total();
    for (std::size_t j = 0; j < nt; ++j) {
      if (state_[j] == VarState::kBasic) continue;
      x_[j] = nonbasic_value(j);
      if (x_[j] != 0.0) active.emplace_back(j, x_[j]);
    }
    for (std::size_t k = 0; k < m_; ++k) {
      double v = rhs_[k];
      const auto& row = tableau_[k];
      for (const auto& [j, xj] : active) v -= row[j] * xj;
      x_[basis_[k]] = v;
    }
  }

  void compute_reduced_costs(const std::vector<double>& c) {
    active_cost_ = c;
    const std::size_t nt = total();
    d_.assign(nt, 0.0);
    for (std::size_t j = 0; j < nt; ++j) d_[j] = c[j];
    for (std::size_t k = 0; k < m_; ++k) {
      const double cb = c[basis_[k]];
      if (cb == 0.0) continue;
      const auto& row = tableau_[k];
      for (std::size_t j = 0; j < nt; ++j) {
        if (row[j] != 0.0) d_[j] -= cb * row[j];
      }
    }
    for (std::size_t k = 0; k < m_; ++k) d_[basis_[k]] = 0.0;
  }

  bool dual_feasible() const {
    const double tol = options_.optimality_tol * 10.0;
    for (std::size_t j = 0; j < total(); ++j) {
      if (state_[j] == VarState::kBasic || lo_[j] == hi_[j]) continue;
      if (state_[j] == VarState::kAtLower && d_[j] < -tol) return false;
      if (state_[j] == VarState::kAtUpper && d_[j] > tol) return false;
      if (state_[j] == VarState::kAtZero && std::abs(d_[j]) > tol) return false;
    }
    return true;
  }

  // Entering candidate for the primal method: returns total() when optimal.
  std::size_t price(bool bland, int& direction) const {
    const double tol = options_.optimality_tol;
    std::size_t best = total();
    double best_score = 0.0;
    for (std::size_t j = 0; j < total(); ++j) {
      const VarState s = state_[j];
      if (s == VarState::kBasic || lo_[j] == hi_[j]) continue;
      const double dj = d_[j];
      int dir = 0;
      if (dj < -tol && (s == VarState::kAtLower || s == VarState::kAtZero)) dir = 1;
      if (dj > tol && (s == VarState::kAtUpper || s == VarState::kAtZero)) dir = -1;
      if (dir == 0) continue;
      if (bland) {
        direction = dir;
        return j;
      }
      if (std::abs(dj) > best_score) {
        best_score = std::abs(dj);
        best = j;
        direction = dir;
      }
    }
    return best;
  }

  struct RatioResult {
    std::size_t row;  // m_ for a bound flip, m_ + 1 for unbounded
    double step;
    VarState leaving_state;
  };

  // Two-pass (Harris) ratio test. In phase 1, infeasible basic variables
  // block when they reach the bound they violate.
  RatioResult ratio_test(std::size_t q, int dir, bool phase1, bool bland) const {
    const double ftol = options_.feasibility_tol;
    const double ptol = options_.pivot_tol;
    auto limit = [&](std::size_t k, double delta, bool relaxed, VarState& st) -> double {
      const std::size_t v = basis_[k];
      const double xv = x_[v];
      const double slack = relaxed ? 0.5 * ftol : 0.0;
      const bool below = xv < lo_[v] - ftol;
      const bool above = xv > hi_[v] + ftol;
      if (phase1 && below) {
        if (delta > 0.0) {
          st = VarState::kAtLower;
          return (lo_[v] - xv + slack) / delta;
        }
        return kInf;
      }
      if (phase1 && above) {
        if (delta < 0.0) {
          st = VarState::kAtUpper;
          return (xv - hi_[v] + slack) / -delta;
        }
        return kInf;
      }
      if (delta < 0.0 && std::isfinite(lo_[v])) {
        st = VarState::kAtLower;
        return std::max(0.0, xv - lo_[v] + slack) / -delta;
      }
      if (delta > 0.0 && std::isfinite(hi_[v])) {
        st = VarState::kAtUpper;
        return std::max(0.0, hi_[v] - xv + slack) / delta;
      }
      return kInf;
    };
    double bound = kInf;
    for (std::size_t k = 0; k < m_; ++k) {
      const double alpha = tableau_[k][q];
      if (std::abs(alpha) <= ptol) continue;
      VarState st{};
      bound = std::min(bound, limit(k, -dir * alpha, true, st));
    }
    const double flip = hi_[q] - lo_[q];
    if (std::isfinite(flip) && flip <= bound) return {m_, flip, VarState::kAtLower};
    if (!std::isfinite(bound)) return {m_ + 1, kInf, VarState::kAtLower};
    std::size_t best = m_ + 1;
    double best_alpha = 0.0;
    double best_step = kInf;
    VarState best_state = VarState::kAtLower;
    for (std::size_t k = 0; k < m_; ++k) {
      const double alpha = tableau_[k][q];
      if (std::abs(alpha) <= ptol) continue;
      VarState st{};
      const double t = limit(k, -dir * alpha, false, st);
      if (t > bound) continue;
      bool take;
      if (bland) {
        take = best == m_ + 1 || basis_[k] < basis_[best];
      } else {
        take = std::abs(alpha) > best_alpha;
      }
      if (take) {
        best = k;
        best_alpha = std::abs(alpha);
        best_step = t;
        best_state = st;
      }
    }
    if (best == m_ + 1) return {m_ + 1, kInf, VarState::kAtLower};
    return {best, best_step, best_state};
  }

  bool primal_feasible() const {
    const double tol = options_.feasibility_tol;
    for (std::size_t k = 0; k < m_; ++k) {
      const std::size_t v = basis_[k];
      if (x_[v] < lo_[v] - tol || x_[v] > hi_[v] + tol) return false;
    }
    return true;
  }

  // Moves a nonbasic variable to its opposite bound.
  void flip_bound(std::size_t q) {
    state_[q] = state_[q] == VarState::kAtUpper ? VarState::kAtLower : VarState::kAtUpper;
    x_[q] = nonbasic_value(q);
    ++iterations_;
    compute_primal();
  }

  LpStatus run_primal() {
    const long cap = iteration_cap();
    const long start = iterations_;
    std::vector<double> c1;
    for (;;) {
      int stall = 0;
      // Phase 1: drive the sum of bound violations of basic variables to zero.
      while (!primal_feasible()) {
        if (iterations_ - start > cap) return status_ = LpStatus::kIterationLimit;
        c1.assign(total(), 0.0);
        const double tol = options_.feasibility_tol;
        for (std::size_t k = 0; k < m_; ++k) {
          const std::size_t v = basis_[k];
          if (x_[v] < lo_[v] - tol) c1[v] = -1.0;
          else if (x_[v] > hi_[v] + tol) c1[v] = 1.0;
        }
        compute_reduced_costs(c1);
        const bool bland = stall >= options_.stall_threshold;
        int dir = 0;
        const std::size_t q = price(bland, dir);
        if (q == total()) return status_ = LpStatus::kInfeasible;
        const RatioResult rr = ratio_test(q, dir, true, bland);
        if (rr.row == m_ + 1) return status_ = LpStatus::kIterationLimit;
        stall = rr.step <= 1e-12 ? stall + 1 : 0;
        if (rr.row == m_) {
          flip_bound(q);
        } else {
          pivot(rr.row, q, rr.leaving_state);
        }
      }
      // Phase 2.
      compute_reduced_costs(cost_);
      stall = 0;
      bool drifted = false;
      for (;;) {
        if (iterations_ - start > cap) return status_ = LpStatus::kIterationLimit;
        const bool bland = stall >= options_.stall_threshold;
        int dir = 0;
        const std::size_t q = price(bland, dir);
        if (q == total()) break;
        const RatioResult rr = ratio_test(q, dir, false, bland);
        if (rr.row == m_ + 1) return status_ = LpStatus::kUnbounded;
        stall = rr.step <= 1e-12 ? stall + 1 : 0;
        if (rr.row == m_) {
          flip_bound(q);
        } else {
          pivot(rr.row, q, rr.leaving_state);
        }
        if (!primal_feasible()) {
          drifted = true;
          break;
        }
      }
      if (!drifted) return status_ = LpStatus::kOptimal;
      // Rounding pushed a basic variable out of its bounds: refactor and
      // go back to phase 1.
      if (!refactor()) reset_to_slack_basis();
    }
  }

  LpStatus run_dual() {
    const long cap = iteration_cap();
    const long start = iterations_;
    const double ftol = options_.feasibility_tol;
    const double otol = options_.optimality_tol;
    const double ptol = options_.pivot_tol;
    int stall = 0;
    for (;;) {
      if (iterations_ - start > cap) return status_ = LpStatus::kIterationLimit;
      const bool bland = stall >= options_.stall_threshold;
      // Leaving row: largest bound violation (Bland: smallest variable index).
      std::size_t r = m_;
      double worst = 0.0;
      for (std::size_t k = 0; k < m_; ++k) {
        const std::size_t v = basis_[k];
        double viol = 0.0;
        if (x_[v] < lo_[v] - ftol) viol = lo_[v] - x_[v];
        else if (x_[v] > hi_[v] + ftol) viol = x_[v] - hi_[v];
        if (viol <= 0.0) continue;
        if (bland) {
          if (r == m_ || v < basis_[r]) r = k;
        } else if (viol > worst) {
          worst = viol;
          r = k;
        }
      }
      if (r == m_) break;
      const std::size_t leaving = basis_[r];
      const bool to_lower = x_[leaving] < lo_[leaving];
      // x_leaving = rhs - sum_j T[r][j] x_j must move up (to_lower) or down.
      const auto& row = tableau_[r];
      auto eligible = [&](std::size_t j, double& alpha) {
        if (state_[j] == VarState::kBasic || lo_[j] == hi_[j]) return false;
        alpha = row[j];
        if (std::abs(alpha) <= ptol) return false;
        // Sign of the change in x_leaving per unit increase of x_j is -alpha.
        const bool can_up = state_[j] == VarState::kAtLower || state_[j] == VarState::kAtZero;
        const bool can_down = state_[j] == VarState::kAtUpper || state_[j] == VarState::kAtZero;
        if (to_lower) return (can_up && alpha < 0.0) || (can_down && alpha > 0.0);
        return (can_up && alpha > 0.0) || (can_down && alpha < 0.0);
      };
      double bound = kInf;
      for (std::size_t j = 0; j < total(); ++j) {
        double alpha = 0.0;
        if (!eligible(j, alpha)) continue;
        bound = std::min(bound, (std::abs(d_[j]) + otol) / std::abs(alpha));
      }
      if (!std::isfinite(bound)) return status_ = LpStatus::kInfeasible;
      std::size_t q = total();
      double best_alpha = 0.0;
      double step = 0.0;
      for (std::size_t j = 0; j < total(); ++j) {
        double alpha = 0.0;
        if (!eligible(j, alpha)) continue;
        const double ratio = std::abs(d_[j]) / std::abs(alpha);
        if (ratio > bound) continue;
        if (bland) {
          if (q == total()) {
            q = j;
            step = ratio;
          }
        } else if (std::abs(alpha) > best_alpha) {
          best_alpha = std::abs(alpha);
          q = j;
          step = ratio;
        }
      }
      stall = step <= 1e-12 ? stall + 1 : 0;
      pivot(r, q, to_lower ? VarState::kAtLower : VarState::kAtUpper);
    }
    // Guard against reduced costs that drifted past the tolerance.
    if (!dual_feasible()) return run_primal();
    return status_ = LpStatus::kOptimal;
  }

  SimplexOptions options_;
  std::size_t n_ = 0;
  std::size_t m_ = 0;
  std::vector<std::vector<double>> rows_;  // original structural coefficients
  std::vector<double> b_;
  std::vector<double> cost_;
  std::vector<double> active_cost_;
  std::vector<double> lo_;
  std::vector<double> hi_;
  std::vector<std::vector<double>> tableau_;
  std::vector<double> rhs_;
  std::vector<std::size_t> basis_;
  std::vector<VarState> state_;
  std::vector<double> x_;
  std::vector<double> d_;
  long iterations_ = 0;
  int pivots_since_refactor_ = 0;
  LpStatus status_ = LpStatus::kIterationLimit;
};

inline LpSolution solve_lp(const LpProblem& problem, const SimplexOptions& options = {}) {
  SimplexSolver solver(problem, options);
  solver.solve();
  return solver.solution();
}

// CPLEX LP text format, for inspecting a model with external tools.
inline std::string to_lp_format(const LpProblem& p, const std::vector<bool>& integer = {},
                                const std::string& name = "pupfl") {
  auto var = [&](std::size_t j) {
    if (j < p.var_names.size() && !p.var_names[j].empty()) return p.var_names[j];
    return "v" + std::to_string(j);
  };
  auto term_list = [&](std::ostream& os, const std::vector<double>& coeffs) {
    bool first = true;
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
      const double a = coeffs[j];
      if (a == 0.0) continue;
      if (a < 0.0) os << (first ? "- " : " - ");
      else if (!first) os << " + ";
      os << std::abs(a) << ' ' << var(j);
      first = false;
    }
    if (first) os << "0 " << var(0);
  };
  std::ostringstream os;
  os << std::setprecision(17);
  os << "\\ " << name << "\nMinimize\n obj: ";
  term_list(os, p.objective);
  os << "\nSubject To\n";
  for (std::size_t r = 0; r < p.rows.size(); ++r) {
    const auto& row = p.rows[r];
    os << ' ' << (row.name.empty() ? "r" + std::to_string(r) : row.name) << ": ";
    term_list(os, row.coeffs);
    switch (row.relation) {
      case Relation::kLessEqual: os << " <= "; break;
      case Relation::kGreaterEqual: os << " >= "; break;
      case Relation::kEqual: os << " = "; break;
    }
    os << row.rhs << '\n';
  }
  os << "Bounds\n";
  for (std::size_t j = 0; j < p.num_vars(); ++j) {
    const double lo = p.lower[j];
    const double hi = p.upper[j];
    if (!std::isfinite(lo) && !std::isfinite(hi)) {
      os << ' ' << var(j) << " free\n";
    } else if (!std::isfinite(lo)) {
      os << " -inf <= " << var(j) << " <= " << hi << '\n';
    } else if (!std::isfinite(hi)) {
      os << ' ' << var(j) << " >= " << lo << '\n';
    } else {
      os << ' ' << lo << " <= " << var(j) << " <= " << hi << '\n';
    }
  }
  bool any_int = false;
  for (std::size_t j = 0; j < integer.size(); ++j) {
    if (!integer[j]) continue;
    if (!any_int) os << "Binaries\n";
    any_int = true;
    os << ' ' << var(j) << '\n';
  }
  os << "End\n";
  return os.str();
}

}  // namespace pupfl
