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

// Method runner and CSV reports shared by the command-line tool and the
// acceptance suite.

#pragma once

#include <algorithm>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "pupfl/benders.hpp"
#include "pupfl/follower.hpp"
#include "pupfl/formulations.hpp"
#include "pupfl/instance.hpp"
#include "pupfl/metrics.hpp"
#include "pupfl/milp.hpp"
#include "pupfl/oracle.hpp"

namespace pupfl {

inline constexpr const char* kVersion = "0.1.0";

enum class Method { kSrm, kPdrm, kBendersLp, kBendersAs, kBrute, kPmedianWt };

inline const std::vector<std::string>& method_names() {
  static const std::vector<std::string> names{"srm",        "pdrm",  "benders-lp",
                                              "benders-as", "brute", "pmedian-wt"};
  return names;
}

inline std::string to_string(Method m) { return method_names()[static_cast<std::size_t>(m)]; }

inline std::optional<Method> parse_method(const std::string& s) {
  const auto& names = method_names();
  const auto it = std::find(names.begin(), names.end(), s);
  if (it == names.end()) return std::nullopt;
  return static_cast<Method>(it - names.begin());
}

struct RunOptions {
  SolverParams params;
  bool srm_relax_y = false;
  bool greedy_start = true;
  // PDRM refuses instances with more than this many (customer, facility)
  // pairs unless raised; 0 disables the cap.
  std::size_t pdrm_max_pairs = 2500;
  std::uint64_t brute_budget = 1000000;
  double delta = 0.0;  // recorded in the report only
};

struct RunRecord {
  std::string instance;
  std::string method;
  int p = 0;
  double delta = 0.0;
  double cpu_s = 0.0;
  std::optional<double> rgap_pct;  // unset: undefined (zbb = 0) or no bound
  double objective = 0.0;          // follower-evaluated cost of the open set
  long nodes = 0;
  long cuts = 0;
  std::string status;
  // Not in the CSV.
  double best_bound = 0.0;
  double abs_gap = 0.0;
  LeaderDecision decision;
  FollowerResponse response;
  SeparationStats separation;
  bool solved() const { return status == "optimal"; }
};

inline double cpu_seconds() { return static_cast<double>(std::clock()) / CLOCKS_PER_SEC; }

namespace detail {

inline void fill_from_milp(RunRecord& rec, const MilpResult& r) {
  rec.status = to_string(r.status);
  rec.nodes = r.nodes;
  rec.cuts = r.cuts;
  rec.best_bound = r.best_bound;
  if (r.has_solution() && std::isfinite(r.best_bound)) {
    rec.abs_gap = std::abs(r.objective - r.best_bound);
  }
  if (r.status == MilpStatus::kOptimal) {
    rec.rgap_pct = 0.0;
  } else if (r.rgap) {
    rec.rgap_pct = reported_rgap(*r.rgap);
  }
}

}  // namespace detail

inline RunRecord run_method(const Instance& inst, Method method, const RunOptions& opt = {}) {
  RunRecord rec;
  rec.instance = inst.name;
  rec.method = to_string(method);
  rec.p = inst.p;
  rec.delta = opt.delta;
  const double t0 = cpu_seconds();
  auto finish_open_set = [&](const LeaderDecision& x) {
    rec.decision = x;
    rec.response = evaluate_leader(inst, x);
    rec.objective = rec.response.phi_total;
  };
  switch (method) {
    case Method::kSrm:
    case Method::kPdrm:
    case Method::kPmedianWt: {
      if (method == Method::kPdrm && opt.pdrm_max_pairs > 0 &&
          inst.n_customers * inst.n_facilities > opt.pdrm_max_pairs) {
        throw std::invalid_argument("pdrm: instance has " +
                                    std::to_string(inst.n_customers * inst.n_facilities) +
                                    " customer-facility pairs, above the cap of " +
                                    std::to_string(opt.pdrm_max_pairs));
      }
      const Formulation f = method == Method::kSrm    ? build_srm(inst, opt.srm_relax_y)
                            : method == Method::kPdrm ? build_pdrm(inst)
                                                      : build_pmedian_ignore_pref(inst);
      const MilpResult r = solve_milp(f.milp, opt.params);
      detail::fill_from_milp(rec, r);
      if (r.has_solution()) finish_open_set(LeaderDecision::from_binary(f.vars.x_values(r.x)));
      break;
    }
    case Method::kBendersLp:
    case Method::kBendersAs: {
      BendersOptions bo;
      bo.route = method == Method::kBendersLp ? SeparationRoute::kLp : SeparationRoute::kAnalytic;
      bo.greedy_start = opt.greedy_start;
      BendersResult b = solve_pup_benders(inst, opt.params, bo);
      detail::fill_from_milp(rec, b.milp);
      rec.separation = std::move(b.stats);
      if (b.milp.has_solution()) finish_open_set(b.decision);
      break;
    }
    case Method::kBrute: {
      const BruteForceResult b = brute_force(inst, opt.brute_budget);
      rec.status = "optimal";
      rec.rgap_pct = 0.0;
      rec.nodes = static_cast<long>(b.subsets);
      finish_open_set(b.decision);
      rec.best_bound = rec.objective;
      break;
    }
  }
  rec.cpu_s = cpu_seconds() - t0;
  return rec;
}

// ---------------------------------------------------------------- reports

inline const char* kCsvHeader =
    "instance,method,p,delta,cpu_s,rgap_pct,objective,nodes,cuts,status";

inline std::string format_number(double v, int precision = 10) {
  std::ostringstream os;
  os << std::setprecision(precision) << v;
  return os.str();
}

inline std::string csv_row(const RunRecord& r) {
  std::ostringstream os;
  os << r.instance << ',' << r.method << ',' << r.p << ',' << format_number(r.delta) << ','
     << std::fixed << std::setprecision(3) << r.cpu_s << std::defaultfloat << ','
     << (r.rgap_pct ? format_number(*r.rgap_pct, 6) : std::string("undef")) << ','
     << format_number(r.objective, 15) << ',' << r.nodes << ',' << r.cuts << ',' << r.status;
  return os.str();
}

// Comment lines describing the host, so timings are read in context.
inline std::string machine_fingerprint() {
  std::ostringstream os;
  std::string cpu = "unknown";
  std::ifstream info("/proc/cpuinfo");
  for (std::string line; std::getline(info, line);) {
    if (line.rfind("model name", 0) == 0) {
      const auto colon = line.find(':');
      if (colon != std::string::npos) cpu = line.substr(colon + 2);
      break;
    }
  }
  os << "# pupfl " << kVersion << "\n";
#if defined(__clang__)
  os << "# compiler clang " << __clang_major__ << "." << __clang_minor__ << "\n";
#elif defined(__GNUC__)
  os << "# compiler gcc " << __GNUC__ << "." << __GNUC_MINOR__ << "\n";
#endif
  os << "# cpu " << cpu << " (" << std::thread::hardware_concurrency() << " threads)\n";
  return os.str();
}

inline std::string solution_document(const RunRecord& r) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "# pupfl solution\n";
  os << "pup-solution 1\n";
  os << "instance " << (r.instance.empty() ? "-" : r.instance) << "\n";
  os << "method " << r.method << "\n";
  os << "status " << r.status << "\n";
  os << "p " << r.p << "\n";
  os << "objective " << r.objective << "\n";
  os << "best_bound " << r.best_bound << "\n";
  os << "rgap_pct " << (r.rgap_pct ? format_number(*r.rgap_pct, 6) : "undef") << "\n";
  os << "abs_gap " << r.abs_gap << "\n";
  os << "nodes " << r.nodes << "\n";
  os << "cuts " << r.cuts << "\n";
  os << "cpu_s " << r.cpu_s << "\n";
  os << "open";
  for (int j : r.decision.open()) os << ' ' << j;
  os << "\nassign";
  for (int m : r.response.chosen) os << ' ' << m;
  os << "\nphi_per_customer";
  for (double v : r.response.phi_per_customer) os << ' ' << v;
  os << "\n";
  return os.str();
}

// Per-instance rows, then AVG cpu per method, ARI of each method against
// the baseline, and per-instance CPU ratios against the baseline. Ratios and
// averages involving a run that did not finish optimally print "n.a.".
inline std::string compare_summary(const std::vector<RunRecord>& runs,
                                   const std::vector<std::string>& methods,
                                   const std::string& baseline = "benders-as") {
  std::ostringstream os;
  std::map<std::string, std::vector<const RunRecord*>> by_method;
  std::map<std::string, std::map<std::string, const RunRecord*>> by_instance;
  std::vector<std::string> instance_order;
  for (const auto& r : runs) {
    by_method[r.method].push_back(&r);
    if (!by_instance.count(r.instance)) instance_order.push_back(r.instance);
    by_instance[r.instance][r.method] = &r;
  }
  std::map<std::string, double> avg;
  for (const auto& m : methods) {
    const auto& rs = by_method[m];
    if (rs.empty()) continue;
    double cpu = 0.0, gap = 0.0;
    bool gap_defined = true;
    for (const RunRecord* r : rs) {
      cpu += r->cpu_s;
      if (r->rgap_pct) {
        gap += *r->rgap_pct;
      } else {
        gap_defined = false;
      }
    }
    avg[m] = cpu / static_cast<double>(rs.size());
    os << "AVG," << m << ",,," << std::fixed << std::setprecision(3) << avg[m]
       << std::defaultfloat << ','
       << (gap_defined ? format_number(gap / static_cast<double>(rs.size()), 6) : "undef")
       << ",,,,\n";
  }
  if (avg.count(baseline) && avg[baseline] > 0.0) {
    for (const auto& m : methods) {
      if (m == baseline || !avg.count(m)) continue;
      os << "ARI," << m << ",,," << format_number(compute_ari(avg[m], avg[baseline]), 6)
         << ",,,,,\n";
    }
  }
  for (const auto& inst : instance_order) {
    const auto& row = by_instance[inst];
    const auto base = row.find(baseline);
    for (const auto& m : methods) {
      if (m == baseline) continue;
      const auto it = row.find(m);
      if (it == row.end()) continue;
      std::string ratio = "n.a.";
      if (base != row.end() && base->second->solved() && it->second->solved() &&
          base->second->cpu_s > 0.0) {
        ratio = format_number(it->second->cpu_s / base->second->cpu_s, 4);
      }
      os << "Ratio:" << inst << ',' << m << ",,," << ratio << ",,,,,\n";
    }
  }
  return os.str();
}

struct SensitivityRow {
  int p = 0;
  double phi_wt = 0.0;
  double phi = 0.0;
  double delta_pct = 0.0;
  std::string status_wt;
  std::string status;
};

inline SensitivityRow sensitivity_at(Instance inst, int p, const RunOptions& opt) {
  inst.p = p;
  if (!validate(inst).empty()) throw InstanceError("sensitivity: p=" + std::to_string(p) + " invalid");
  const RunRecord wt = run_method(inst, Method::kPmedianWt, opt);
  const RunRecord as = run_method(inst, Method::kBendersAs, opt);
  SensitivityRow row;
  row.p = p;
  row.phi_wt = wt.objective;
  row.phi = as.objective;
  row.delta_pct = compute_delta(wt.objective, as.objective);
  row.status_wt = wt.status;
  row.status = as.status;
  return row;
}

inline const char* kSensitivityHeader = "p,phi_wt,phi,delta_pct,status_wt,status";

inline std::string sensitivity_row_csv(const SensitivityRow& r) {
  std::ostringstream os;
  os << r.p << ',' << format_number(r.phi_wt, 15) << ',' << format_number(r.phi, 15) << ','
     << std::fixed << std::setprecision(2) << r.delta_pct << std::defaultfloat << ','
     << r.status_wt << ',' << r.status;
  return os.str();
}

}  // namespace pupfl
