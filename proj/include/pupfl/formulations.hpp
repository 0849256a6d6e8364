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

// Single-level MILP models solved directly by branch and bound.
//
//   srm      closest-assignment rows: sum_k pi_ik y_ik <= (pi_ij - 1) x_j + 1
//   pdrm     optimality conditions of the customers' assignment LP, with
//            the complementarity products linearized by unit big-M rows
//   pmedian  the classical model, preferences dropped
//
// All three use the preference matrix pi (row maxima equal 1), which is what
// makes the unit big-M constants valid.

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pupfl/instance.hpp"
#include "pupfl/lp.hpp"
#include "pupfl/milp.hpp"

namespace pupfl {

// Column layout: x first, then y row-major, then (pdrm only) alpha and beta.
struct VariableMap {
  std::size_t n_customers = 0;
  std::size_t n_facilities = 0;
  std::size_t x_begin = 0;
  std::size_t y_begin = 0;
  std::size_t alpha_begin = 0;
  std::size_t beta_begin = 0;
  std::size_t n_alpha = 0;
  std::size_t n_beta = 0;

  std::size_t x(std::size_t j) const { return x_begin + j; }
  std::size_t y(std::size_t i, std::size_t j) const { return y_begin + i * n_facilities + j; }
  std::size_t alpha(std::size_t i) const { return alpha_begin + i; }
  std::size_t beta(std::size_t i, std::size_t j) const {
    return beta_begin + i * n_facilities + j;
  }
  std::size_t size() const {
    return n_facilities + n_customers * n_facilities + n_alpha + n_beta;
  }

  std::vector<double> x_values(std::span<const double> sol) const {
    return {sol.begin() + static_cast<std::ptrdiff_t>(x_begin),
            sol.begin() + static_cast<std::ptrdiff_t>(x_begin + n_facilities)};
  }
};

struct Formulation {
  MilpProblem milp;
  VariableMap vars;
};

namespace detail {

// x and y columns, the assignment and linking rows, and the objective.
inline Formulation assignment_core(const Instance& inst, bool y_binary, const std::string& name) {
  Formulation f;
  auto& lp = f.milp.lp;
  auto& vm = f.vars;
  const std::size_t ni = inst.n_customers;
  const std::size_t nj = inst.n_facilities;
  vm.n_customers = ni;
  vm.n_facilities = nj;
  vm.x_begin = 0;
  vm.y_begin = nj;
  for (std::size_t j = 0; j < nj; ++j) {
    lp.add_variable(0.0, 0.0, 1.0, "x_" + std::to_string(j));
    f.milp.integer.push_back(true);
  }
  for (std::size_t i = 0; i < ni; ++i) {
    for (std::size_t j = 0; j < nj; ++j) {
      lp.add_variable(inst.cost(i, j), 0.0, 1.0,
                      "y_" + std::to_string(i) + "_" + std::to_string(j));
      f.milp.integer.push_back(y_binary);
    }
  }
  const std::size_t n = lp.num_vars();
  for (std::size_t i = 0; i < ni; ++i) {
    std::vector<double> row(n, 0.0);
    for (std::size_t j = 0; j < nj; ++j) row[vm.y(i, j)] = 1.0;
    lp.add_row(std::move(row), Relation::kEqual, 1.0, "assign_" + std::to_string(i));
  }
  for (std::size_t i = 0; i < ni; ++i) {
    for (std::size_t j = 0; j < nj; ++j) {
      std::vector<double> row(n, 0.0);
      row[vm.y(i, j)] = 1.0;
      row[vm.x(j)] = -1.0;
      lp.add_row(std::move(row), Relation::kLessEqual, 0.0,
                 "link_" + std::to_string(i) + "_" + std::to_string(j));
    }
  }
  f.milp.name = name;
  return f;
}

inline void add_cardinality(Formulation& f, int p) {
  std::vector<double> row(f.milp.lp.num_vars(), 0.0);
  for (std::size_t j = 0; j < f.vars.n_facilities; ++j) row[f.vars.x(j)] = 1.0;
  f.milp.lp.add_row(std::move(row), Relation::kEqual, static_cast<double>(p), "open_p");
}

}  // namespace detail

// Rows: |I| assignment, |I||J| linking, |I||J| closest-assignment, 1 cardinality.
inline Formulation build_srm(const Instance& inst, bool relax_y = false) {
  Formulation f = detail::assignment_core(inst, !relax_y, inst.name + ":srm");
  auto& lp = f.milp.lp;
  const auto& vm = f.vars;
  const std::size_t n = lp.num_vars();
  for (std::size_t i = 0; i < inst.n_customers; ++i) {
    for (std::size_t j = 0; j < inst.n_facilities; ++j) {
      std::vector<double> row(n, 0.0);
      for (std::size_t k = 0; k < inst.n_facilities; ++k) row[vm.y(i, k)] = inst.pi(i, k);
      row[vm.x(j)] = -(inst.pi(i, j) - 1.0);
      lp.add_row(std::move(row), Relation::kLessEqual, 1.0,
                 "cac_" + std::to_string(i) + "_" + std::to_string(j));
    }
  }
  detail::add_cardinality(f, inst.p);
  return f;
}

inline Formulation build_pdrm(const Instance& inst) {
  Formulation f = detail::assignment_core(inst, true, inst.name + ":pdrm");
  auto& lp = f.milp.lp;
  auto& vm = f.vars;
  const std::size_t ni = inst.n_customers;
  const std::size_t nj = inst.n_facilities;
  vm.alpha_begin = lp.num_vars();
  vm.n_alpha = ni;
  for (std::size_t i = 0; i < ni; ++i) {
    lp.add_variable(0.0, -kInf, kInf, "alpha_" + std::to_string(i));
    f.milp.integer.push_back(false);
  }
  vm.beta_begin = lp.num_vars();
  vm.n_beta = ni * nj;
  for (std::size_t i = 0; i < ni; ++i) {
    for (std::size_t j = 0; j < nj; ++j) {
      lp.add_variable(0.0, -kInf, 0.0, "beta_" + std::to_string(i) + "_" + std::to_string(j));
      f.milp.integer.push_back(false);
    }
  }
  const std::size_t n = lp.num_vars();
  for (std::size_t i = 0; i < ni; ++i) {
    for (std::size_t j = 0; j < nj; ++j) {
      const std::string tag = std::to_string(i) + "_" + std::to_string(j);
      const double pij = inst.pi(i, j);
      {  // dual feasibility
        std::vector<double> row(n, 0.0);
        row[vm.alpha(i)] = 1.0;
        row[vm.beta(i, j)] = 1.0;
        lp.add_row(std::move(row), Relation::kLessEqual, pij, "dualfeas_" + tag);
      }
      {  // y_ij = 1 forces a tight reduced cost
        std::vector<double> row(n, 0.0);
        row[vm.alpha(i)] = 1.0;
        row[vm.beta(i, j)] = 1.0;
        row[vm.y(i, j)] = -1.0;
        lp.add_row(std::move(row), Relation::kGreaterEqual, pij - 1.0, "compl_y_" + tag);
      }
      {  // y_ij < x_j forces beta_ij = 0
        std::vector<double> row(n, 0.0);
        row[vm.beta(i, j)] = 1.0;
        row[vm.y(i, j)] = 1.0;
        row[vm.x(j)] = -1.0;
        lp.add_row(std::move(row), Relation::kGreaterEqual, -1.0, "compl_x_" + tag);
      }
    }
  }
  detail::add_cardinality(f, inst.p);
  return f;
}

// Classical P-median: no closest-assignment rows, y continuous.
inline Formulation build_pmedian_ignore_pref(const Instance& inst) {
  Formulation f = detail::assignment_core(inst, false, inst.name + ":pmedian");
  detail::add_cardinality(f, inst.p);
  return f;
}

// Multipliers of the assignment LP at a binary decision: alpha_i = pi_im and
// beta_ij = min(0, pi_ij - pi_im) on closed facilities, 0 on open ones.
struct PdrmDuals {
  std::vector<double> alpha;
  std::vector<double> beta;  // row-major |I| x |J|
};

inline PdrmDuals pdrm_duals(const Instance& inst, const LeaderDecision& x,
                            const std::vector<int>& chosen) {
  PdrmDuals d;
  d.alpha.resize(inst.n_customers);
  d.beta.assign(inst.n_customers * inst.n_facilities, 0.0);
  for (std::size_t i = 0; i < inst.n_customers; ++i) {
    const double pim = inst.pi(i, static_cast<std::size_t>(chosen[i]));
    d.alpha[i] = pim;
    for (std::size_t j = 0; j < inst.n_facilities; ++j) {
      if (!x.is_open(static_cast<int>(j))) {
        d.beta[i * inst.n_facilities + j] = std::min(0.0, inst.pi(i, j) - pim);
      }
    }
  }
  return d;
}

}  // namespace pupfl
