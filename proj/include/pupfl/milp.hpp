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

// Mixed-binary branch and cut over the simplex kernel.
//
// A single SimplexSolver lives for the whole search. Moving to another node
// only rewrites the bounds of the binary columns and warm starts from the
// previous basis. Lazy rows are appended to that solver, so they are global
// by construction.

#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pupfl/lp.hpp"
#include "pupfl/metrics.hpp"

namespace pupfl {

class MilpError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LazyCut {
  LpRow row;
  // Relative violation at the point that produced the cut; positive means
  // violated.
  double violation = 0.0;
};

struct MilpIncumbent {
  std::vector<double> x;
  double objective = 0.0;
};

struct MilpProblem {
  LpProblem lp;
  std::vector<bool> integer;  // binary flags, one per column
  // Called at every LP point whose binaries are integral (after rounding).
  // Must only return rows valid for every feasible solution.
  std::function<std::vector<LazyCut>(std::span<const double>)> lazy_callback;
  // True objective of an integral point when the LP value may understate it
  // (cuts are only added above a violation threshold). Optional.
  std::function<double(std::span<const double>)> exact_objective;
  std::optional<MilpIncumbent> initial_incumbent;
  std::string name;
};

struct NodeRecord {
  long node = 0;
  int depth = 0;
  std::string event;  // branch | integral | cut | infeasible | pruned
  double lp_objective = 0.0;
  double best_bound = 0.0;
  double incumbent = 0.0;  // +inf when none yet
  long pool_size = 0;
  double seconds = 0.0;
};

struct SolverParams {
  double time_limit = 7200.0;
  double rel_gap_tol = 1e-6;
  double int_feas_tol = 1e-9;
  double cut_violation_tol = 1e-5;
  long max_nodes = 0;  // 0: unlimited
  SimplexOptions lp_options;
  std::function<void(const NodeRecord&)> node_log;
};

enum class MilpStatus { kOptimal, kTimeLimit, kNodeLimit, kInfeasible };

inline const char* to_string(MilpStatus s) {
  switch (s) {
    case MilpStatus::kOptimal: return "optimal";
    case MilpStatus::kTimeLimit: return "time_limit";
    case MilpStatus::kNodeLimit: return "node_limit";
    case MilpStatus::kInfeasible: return "infeasible";
  }
  return "unknown";
}

struct MilpResult {
  MilpStatus status = MilpStatus::kInfeasible;
  std::vector<double> x;
  double objective = std::numeric_limits<double>::infinity();  // zopt
  double best_bound = -std::numeric_limits<double>::infinity();  // zbb
  std::optional<double> rgap;  // percent, unset when zbb = 0 or no incumbent
  long nodes = 0;
  long cuts = 0;
  long lp_iterations = 0;
  long integer_points = 0;
  double seconds = 0.0;
  bool has_solution() const { return !x.empty(); }
};

namespace detail {

struct BbNode {
  double bound;
  std::uint64_t seq;
  int depth;
  std::vector<std::int8_t> fix;  // per binary: -1 free, 0, 1
};

struct WorseNode {
  bool operator()(const BbNode& a, const BbNode& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.seq > b.seq;
  }
};

}  // namespace detail

inline MilpResult solve_milp(const MilpProblem& problem, const SolverParams& params = {}) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - start).count(); };
  constexpr double kInfty = std::numeric_limits<double>::infinity();

  const LpProblem& base = problem.lp;
  const std::size_t n = base.num_vars();
  if (problem.integer.size() != n) throw MilpError("integrality flags do not match columns");
  std::vector<std::size_t> bins;
  for (std::size_t j = 0; j < n; ++j) {
    if (!problem.integer[j]) continue;
    if (base.lower[j] < 0.0 || base.upper[j] > 1.0) {
      throw MilpError("binary column " + std::to_string(j) + " has bounds outside [0, 1]");
    }
    bins.push_back(j);
  }

  MilpResult res;
  double inc = kInfty;
  if (problem.initial_incumbent) {
    inc = problem.initial_incumbent->objective;
    res.x = problem.initial_incumbent->x;
  }
  auto slack = [&](double z) { return params.rel_gap_tol * std::max(1.0, std::abs(z)); };
  auto cutoff = [&] { return inc - slack(inc); };

  SimplexSolver lp(base, params.lp_options);
  std::vector<std::int8_t> applied(bins.size(), -1);
  auto apply = [&](const std::vector<std::int8_t>& fix) {
    bool changed = false;
    for (std::size_t b = 0; b < bins.size(); ++b) {
      if (fix[b] == applied[b]) continue;
      const std::size_t j = bins[b];
      if (fix[b] < 0) {
        lp.set_bounds(j, base.lower[j], base.upper[j], false);
      } else {
        const double v = fix[b];
        lp.set_bounds(j, v, v, false);
      }
      applied[b] = fix[b];
      changed = true;
    }
    if (changed) lp.refresh_primal();
  };

  std::priority_queue<detail::BbNode, std::vector<detail::BbNode>, detail::WorseNode> open;
  std::uint64_t seq = 0;
  open.push({-kInfty, seq++, 0, std::vector<std::int8_t>(bins.size(), -1)});
  double global_bound = -kInfty;
  bool first = true;
  bool stopped = false;
  MilpStatus stop_status = MilpStatus::kOptimal;

  auto log = [&](const detail::BbNode& node, const char* event, double lp_obj) {
    if (!params.node_log) return;
    NodeRecord r;
    r.node = res.nodes;
    r.depth = node.depth;
    r.event = event;
    r.lp_objective = lp_obj;
    r.best_bound = global_bound;
    r.incumbent = inc;
    r.pool_size = res.cuts;
    r.seconds = elapsed();
    params.node_log(r);
  };

  std::vector<double> xr(n);
  while (!open.empty()) {
    if (!first) {
      if (elapsed() >= params.time_limit) {
        stopped = true;
        stop_status = MilpStatus::kTimeLimit;
        break;
      }
      if (params.max_nodes > 0 && res.nodes >= params.max_nodes) {
        stopped = true;
        stop_status = MilpStatus::kNodeLimit;
        break;
      }
    }
    detail::BbNode node = open.top();
    open.pop();
    if (node.bound >= cutoff()) continue;
    ++res.nodes;
    apply(node.fix);
    for (;;) {
      const LpStatus st = first ? lp.solve() : lp.reoptimize();
      first = false;
      if (st == LpStatus::kInfeasible) {
        log(node, "infeasible", kInfty);
        break;
      }
      if (st == LpStatus::kUnbounded) {
        throw MilpError("node LP unbounded in '" + problem.name + "'; add bounds to the model");
      }
      if (st != LpStatus::kOptimal) {
        throw MilpError("node LP failed (" + std::string(to_string(st)) + ") in '" +
                        problem.name + "'");
      }
      const double obj = lp.objective();
      if (obj >= cutoff()) {
        log(node, "pruned", obj);
        break;
      }
      const auto xv = lp.values();
      std::size_t branch = bins.size();
      double most = params.int_feas_tol;
      for (std::size_t b = 0; b < bins.size(); ++b) {
        const double v = xv[bins[b]];
        const double frac = std::min(v - std::floor(v), std::ceil(v) - v);
        if (frac > most) {
          most = frac;
          branch = b;
        }
      }
      if (branch < bins.size()) {
        for (int side = 0; side <= 1; ++side) {
          detail::BbNode child{obj, seq++, node.depth + 1, node.fix};
          child.fix[branch] = static_cast<std::int8_t>(side);
          open.push(std::move(child));
        }
        log(node, "branch", obj);
        break;
      }
      std::copy(xv.begin(), xv.end(), xr.begin());
      for (std::size_t j : bins) xr[j] = std::round(xr[j]);
      ++res.integer_points;
      if (problem.lazy_callback) {
        std::vector<LazyCut> cuts = problem.lazy_callback(xr);
        std::vector<const LazyCut*> take;
        for (const auto& c : cuts) {
          if (c.violation > params.cut_violation_tol) take.push_back(&c);
        }
        if (take.empty() && problem.exact_objective) {
          const double exact = problem.exact_objective(xr);
          if (exact - obj > slack(exact)) {
            for (const auto& c : cuts) {
              if (c.violation > 0.0) take.push_back(&c);
            }
          }
        }
        if (!take.empty()) {
          for (const LazyCut* c : take) lp.add_row(c->row);
          res.cuts += static_cast<long>(take.size());
          log(node, "cut", obj);
          if (elapsed() >= params.time_limit) {
            // Hand the node back so the bound computation still sees it.
            open.push({obj, seq++, node.depth, node.fix});
            break;
          }
          continue;
        }
      }
      const double value = problem.exact_objective ? problem.exact_objective(xr) : obj;
      if (value < inc) {
        inc = value;
        res.x = xr;
      }
      log(node, "integral", obj);
      break;
    }
    const double frontier = open.empty() ? inc : std::min(open.top().bound, inc);
    global_bound = std::max(global_bound, frontier);
    if (inc < kInfty && inc - global_bound <= slack(inc)) break;
  }
  res.lp_iterations = lp.iterations();

  if (stopped) {
    const double frontier = open.empty() ? inc : std::min(open.top().bound, inc);
    global_bound = std::max(global_bound, frontier);
    res.status = stop_status;
  } else {
    res.status = inc < kInfty ? MilpStatus::kOptimal : MilpStatus::kInfeasible;
    global_bound = std::min(global_bound, inc);
  }
  res.objective = inc;
  res.best_bound = global_bound;
  if (inc < kInfty && std::isfinite(global_bound)) res.rgap = compute_rgap(inc, global_bound);
  res.seconds = elapsed();
  return res;
}

}  // namespace pupfl
