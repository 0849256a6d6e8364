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

// Benders branch and cut for the leader's problem.
//
// Master: min sum_i w_i  s.t.  sum_j x_j = P,  x binary,
//         w_i >= min_j c_ij,  plus cuts w_i - coeff . x >= constant
// added lazily at integral master points. The master starts with no cuts;
// the floor on w_i keeps its LP bounded and is valid because every customer
// pays at least its cheapest cost.

#pragma once

#include <algorithm>
#include <chrono>
#include <numeric>
#include <optional>
#include <vector>

#include "pupfl/follower.hpp"
#include "pupfl/instance.hpp"
#include "pupfl/milp.hpp"
#include "pupfl/separation.hpp"

namespace pupfl {

enum class SeparationRoute { kAnalytic, kLp };

inline const char* to_string(SeparationRoute r) {
  return r == SeparationRoute::kAnalytic ? "analytic" : "lp";
}

struct SeparationStats {
  long integer_points = 0;
  long separations = 0;  // customer subproblems handled
  long lp_solves = 0;
  double analytic_seconds = 0.0;
  double lp_seconds = 0.0;
  // Leader decisions in the order they were separated, when recording.
  std::vector<LeaderDecision> points;
};

struct BendersOptions {
  SeparationRoute route = SeparationRoute::kAnalytic;
  bool greedy_start = true;
  bool record_points = false;
};

struct BendersResult {
  MilpResult milp;
  LeaderDecision decision;
  FollowerResponse response;
  SeparationStats stats;
};

// Opens the P facilities with the smallest total cost over all customers.
inline LeaderDecision greedy_cost_decision(const Instance& inst) {
  std::vector<double> colsum(inst.n_facilities, 0.0);
  for (std::size_t i = 0; i < inst.n_customers; ++i)
    for (std::size_t j = 0; j < inst.n_facilities; ++j) colsum[j] += inst.cost(i, j);
  std::vector<int> order(inst.n_facilities);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return colsum[a] < colsum[b]; });
  order.resize(static_cast<std::size_t>(inst.p));
  return LeaderDecision(std::move(order));
}

// One cut for customer i at decision x through the chosen route.
inline BendersCut separate(const Instance& inst, const LeaderDecision& x, std::size_t i,
                           SeparationRoute route, SeparationStats* stats = nullptr) {
  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();
  BendersCut cut;
  if (route == SeparationRoute::kAnalytic) {
    cut = cut_from_duals(analytic_duals(inst, x, i), inst, CutOrigin::kAnalytic);
  } else {
    cut = cut_from_duals(lp_duals_oracle(inst, x, i), inst, CutOrigin::kLp);
  }
  if (stats != nullptr) {
    const double dt = std::chrono::duration<double>(Clock::now() - t0).count();
    ++stats->separations;
    if (route == SeparationRoute::kAnalytic) {
      stats->analytic_seconds += dt;
    } else {
      stats->lp_seconds += dt;
      ++stats->lp_solves;
    }
  }
  return cut;
}

// Separates every customer at each listed decision and returns the counters.
// Used to time both routes on one fixed sequence of master points.
inline SeparationStats replay_separation(const Instance& inst,
                                         const std::vector<LeaderDecision>& points,
                                         SeparationRoute route) {
  SeparationStats stats;
  for (const auto& x : points) {
    ++stats.integer_points;
    for (std::size_t i = 0; i < inst.n_customers; ++i) separate(inst, x, i, route, &stats);
  }
  return stats;
}

inline BendersResult solve_pup_benders(const Instance& inst, const SolverParams& params = {},
                                       const BendersOptions& opts = {}) {
  const std::size_t ni = inst.n_customers;
  const std::size_t nj = inst.n_facilities;
  BendersResult out;
  SeparationStats& stats = out.stats;

  MilpProblem mp;
  mp.name = inst.name + ":benders-" + to_string(opts.route);
  for (std::size_t j = 0; j < nj; ++j) {
    mp.lp.add_variable(0.0, 0.0, 1.0, "x_" + std::to_string(j));
    mp.integer.push_back(true);
  }
  for (std::size_t i = 0; i < ni; ++i) {
    const auto row = inst.cost.row(i);
    const double floor = *std::min_element(row.begin(), row.end());
    mp.lp.add_variable(1.0, floor, kInf, "w_" + std::to_string(i));
    mp.integer.push_back(false);
  }
  {
    std::vector<double> card(nj + ni, 0.0);
    std::fill(card.begin(), card.begin() + static_cast<std::ptrdiff_t>(nj), 1.0);
    mp.lp.add_row(std::move(card), Relation::kEqual, static_cast<double>(inst.p), "open_p");
  }

  auto decision_of = [nj](std::span<const double> v) {
    return LeaderDecision::from_binary(v.subspan(0, nj));
  };

  mp.lazy_callback = [&](std::span<const double> v) {
    const LeaderDecision x = decision_of(v);
    ++stats.integer_points;
    if (opts.record_points) stats.points.push_back(x);
    std::vector<LazyCut> cuts;
    cuts.reserve(ni);
    for (std::size_t i = 0; i < ni; ++i) {
      BendersCut cut = separate(inst, x, i, opts.route, &stats);
      const double w = v[nj + i];
      LazyCut lc;
      lc.violation = relative_violation(cut, v.subspan(0, nj), w);
      lc.row.coeffs.assign(nj + ni, 0.0);
      for (std::size_t j = 0; j < nj; ++j) lc.row.coeffs[j] = -cut.coeff[j];
      lc.row.coeffs[nj + i] = 1.0;
      lc.row.relation = Relation::kGreaterEqual;
      lc.row.rhs = cut.constant;
      cuts.push_back(std::move(lc));
    }
    return cuts;
  };
  mp.exact_objective = [&](std::span<const double> v) {
    return evaluate_leader(inst, decision_of(v)).phi_total;
  };

  if (opts.greedy_start) {
    const LeaderDecision g = greedy_cost_decision(inst);
    const FollowerResponse r = evaluate_leader(inst, g);
    MilpIncumbent start;
    start.x = g.to_binary(nj);
    start.x.insert(start.x.end(), r.phi_per_customer.begin(), r.phi_per_customer.end());
    start.objective = r.phi_total;
    mp.initial_incumbent = std::move(start);
  }

  out.milp = solve_milp(mp, params);
  if (out.milp.has_solution()) {
    out.decision = decision_of(out.milp.x);
    out.response = evaluate_leader(inst, out.decision);
  }
  return out;
}

}  // namespace pupfl
