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

// End-to-end acceptance checks. Prints one PASS/FAIL/SKIP line per check and
// exits non-zero if any check fails.
//
//   acceptance [path/to/pupfl]
//
// The optional CLI path enables the command-level determinism check.
// PUPFL_PMPUP_DIR points at the PMPUP benchmark files (inst-333, inst-433).

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <memory>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "pupfl.hpp"

namespace {

using namespace pupfl;

struct Outcome {
  enum Kind { kPass, kFail, kSkip } kind = kPass;
  std::string detail;
};

Outcome pass(std::string d) { return {Outcome::kPass, std::move(d)}; }
Outcome fail(std::string d) { return {Outcome::kFail, std::move(d)}; }
Outcome skip(std::string d) { return {Outcome::kSkip, std::move(d)}; }

// The seeded sweep shared by the first two checks.
std::vector<Instance> sweep_instances() {
  std::vector<Instance> out;
  CounterRng rng(20260101);
  for (int k = 0; k < 200; ++k) {
    RndSpec s;
    s.n_customers = 5 + rng.next_u64() % 16;
    s.n_facilities = 4 + rng.next_u64() % 7;
    s.p = 2 + static_cast<int>(rng.next_u64() % 2);
    s.delta = (rng.next_u64() % 2 == 0) ? 0.3 : 0.5;
    s.seed = 1000 + static_cast<std::uint64_t>(k);
    out.push_back(generate_rnd(s));
  }
  return out;
}

double round6(double v) { return std::round(v * 1e6) / 1e6; }

Outcome oracle_equivalence(const std::vector<Instance>& insts) {
  const auto t0 = std::chrono::steady_clock::now();
  int bad = 0;
  std::string first;
  for (const auto& inst : insts) {
    const RunRecord r = run_method(inst, Method::kBendersAs);
    const BruteForceResult b = brute_force(inst);
    if (!r.solved() || round6(r.objective) != round6(b.response.phi_total)) {
      if (bad++ == 0) {
        first = inst.name + " benders " + format_number(r.objective) + " brute " +
                format_number(b.response.phi_total);
      }
    }
  }
  const double s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::ostringstream d;
  d << insts.size() << " instances, " << bad << " mismatches, " << format_number(s, 3) << " s";
  if (bad > 0) return fail(d.str() + "; first: " + first);
  if (s >= 60.0) return fail(d.str() + " (over the 60 s budget)");
  return pass(d.str());
}

Outcome cross_agreement(const std::vector<Instance>& insts) {
  int bad = 0;
  std::string first;
  std::size_t checked = 0;
  for (std::size_t k = 0; k < insts.size() && checked < 50; k += 4, ++checked) {
    const Instance& inst = insts[k];
    RunOptions relaxed;
    relaxed.srm_relax_y = true;
    const std::vector<std::pair<std::string, RunRecord>> runs = {
        {"srm", run_method(inst, Method::kSrm)},
        {"srm-relax-y", run_method(inst, Method::kSrm, relaxed)},
        {"pdrm", run_method(inst, Method::kPdrm)},
        {"benders-lp", run_method(inst, Method::kBendersLp)},
        {"benders-as", run_method(inst, Method::kBendersAs)},
    };
    const double ref = runs.back().second.objective;
    for (const auto& [name, r] : runs) {
      if (!r.solved() || std::abs(r.objective - ref) > 1e-6) {
        if (bad++ == 0) first = inst.name + " " + name + " " + format_number(r.objective);
      }
    }
  }
  std::ostringstream d;
  d << checked << " instances x 5 methods, " << bad << " disagreements";
  return bad == 0 ? pass(d.str()) : fail(d.str() + "; first: " + first);
}

// Random P-subset of {0..n-1}.
LeaderDecision random_decision(CounterRng& rng, int n, int p) {
  std::vector<int> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  for (int k = 0; k < p; ++k) {
    const int r = k + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(n - k));
    std::swap(idx[k], idx[r]);
  }
  idx.resize(static_cast<std::size_t>(p));
  return LeaderDecision(std::move(idx));
}

// Per-customer subproblem at fixed x with y >= 0 and no upper bound.
LpSolution customer_subproblem(const Instance& inst, const LeaderDecision& x, std::size_t i) {
  const std::size_t nj = inst.n_facilities;
  LpProblem lp;
  for (std::size_t j = 0; j < nj; ++j) lp.add_variable(inst.cost(i, j), 0.0, kInf);
  lp.add_row(std::vector<double>(nj, 1.0), Relation::kEqual, 1.0);
  for (std::size_t j = 0; j < nj; ++j) {
    std::vector<double> row(nj, 0.0);
    row[j] = 1.0;
    lp.add_row(std::move(row), Relation::kLessEqual, x.is_open(static_cast<int>(j)) ? 1.0 : 0.0);
  }
  for (std::size_t j = 0; j < nj; ++j) {
    std::vector<double> row(inst.pi.row(i).begin(), inst.pi.row(i).end());
    const double xj = x.is_open(static_cast<int>(j)) ? 1.0 : 0.0;
    lp.add_row(std::move(row), Relation::kLessEqual, (inst.pi(i, j) - 1.0) * xj + 1.0);
  }
  return solve_lp(lp);
}

Outcome subproblem_integrality() {
  CounterRng rng(77);
  int bad = 0;
  std::string first;
  for (int k = 0; k < 100; ++k) {
    const auto nj = static_cast<int>(4 + rng.next_u64() % 7);
    const int p = 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(nj - 1));
    const Instance inst =
        generate_rnd({5 + rng.next_u64() % 11, static_cast<std::size_t>(nj), 0.5,
                      5000 + static_cast<std::uint64_t>(k), p});
    const LeaderDecision x = random_decision(rng, nj, p);
    for (std::size_t i = 0; i < inst.n_customers; ++i) {
      const LpSolution s = customer_subproblem(inst, x, i);
      bool ok = s.status == LpStatus::kOptimal;
      for (double y : s.x) ok = ok && std::abs(y - std::round(y)) <= 1e-6;
      if (!ok && bad++ == 0) first = inst.name + " customer " + std::to_string(i);
    }
  }
  std::ostringstream d;
  d << "100 (instance, x) pairs, " << bad << " fractional subproblem solutions";
  return bad == 0 ? pass(d.str()) : fail(d.str() + "; first: " + first);
}

std::vector<LeaderDecision> all_subsets(int n, int p) {
  std::vector<LeaderDecision> out;
  std::vector<int> idx(static_cast<std::size_t>(p));
  std::iota(idx.begin(), idx.end(), 0);
  for (;;) {
    out.emplace_back(idx);
    int k = p - 1;
    while (k >= 0 && idx[k] == n - p + k) --k;
    if (k < 0) break;
    ++idx[k];
    for (int t = k + 1; t < p; ++t) idx[t] = idx[t - 1] + 1;
  }
  return out;
}

Outcome analytic_separation() {
  CounterRng rng(4242);
  long triples = 0, infeasible = 0, wrong_value = 0, loose = 0, invalid = 0;
  double worst_feas = 0.0;
  for (int k = 0; k < 50; ++k) {
    const auto nj = static_cast<int>(4 + rng.next_u64() % 7);
    const int p = 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(std::min(nj - 1, 4)));
    const double delta = (k % 2 == 0) ? 0.3 : 0.5;
    const Instance inst = generate_rnd({6 + rng.next_u64() % 10, static_cast<std::size_t>(nj),
                                        delta, 9000 + static_cast<std::uint64_t>(k), p});
    const auto omega = all_subsets(nj, p);
    std::vector<std::vector<double>> phi;
    std::vector<std::vector<double>> omega_x;
    for (const auto& s : omega) {
      phi.push_back(evaluate_leader(inst, s).phi_per_customer);
      omega_x.push_back(s.to_binary(inst.n_facilities));
    }
    for (int t = 0; t < 20; ++t, ++triples) {
      const std::size_t s = rng.next_u64() % omega.size();
      const std::size_t i = rng.next_u64() % inst.n_customers;
      const DualTriple d = analytic_duals(inst, omega[s], i);
      const double feas = dual_infeasibility(d, inst);
      worst_feas = std::max(worst_feas, feas);
      if (feas > 1e-9) ++infeasible;
      const int m = most_preferred(inst, omega[s], i);
      const double cim = inst.cost(i, static_cast<std::size_t>(m));
      if (std::abs(dual_objective(d, inst, omega_x[s]) - cim) > 1e-9) ++wrong_value;
      const BendersCut cut = cut_from_duals(d, inst);
      if (std::abs(cut.value(omega_x[s]) - cim) > 1e-9) ++loose;
      for (std::size_t u = 0; u < omega.size(); ++u) {
        if (cut.value(omega_x[u]) > phi[u][i] + 1e-9 * std::max(1.0, phi[u][i])) {
          ++invalid;
          break;
        }
      }
    }
  }
  std::ostringstream d;
  d << triples << " triples: " << infeasible << " infeasible (worst " << worst_feas << "), "
    << wrong_value << " wrong objective, " << loose << " not tight, " << invalid
    << " invalid on the full set of P-subsets";
  return infeasible + wrong_value + loose + invalid == 0 ? pass(d.str()) : fail(d.str());
}

std::string find_pmpup(const std::filesystem::path& dir, const std::string& id) {
  for (const char* ext : {"", ".txt", ".dat"}) {
    const auto p = dir / (id + ext);
    if (std::filesystem::is_regular_file(p)) return p.string();
  }
  return {};
}

Outcome pmpup_reproduction() {
  const char* env = std::getenv("PUPFL_PMPUP_DIR");
  if (env == nullptr || *env == '\0') return skip("PUPFL_PMPUP_DIR not set; dataset unavailable");
  const std::string f333 = find_pmpup(env, "inst-333");
  const std::string f433 = find_pmpup(env, "inst-433");
  if (f333.empty() || f433.empty()) {
    return skip(std::string("inst-333/inst-433 not found in ") + env);
  }
  RunOptions opt;
  const SensitivityRow a =
      sensitivity_at(parse_pmpup(read_file(f333), "inst-333", 14), 14, opt);
  const SensitivityRow b =
      sensitivity_at(parse_pmpup(read_file(f433), "inst-433", 14), 14, opt);
  std::ostringstream d;
  d << "inst-333 phi " << a.phi << " phi_wt " << a.phi_wt << " delta " << format_number(a.delta_pct, 4)
    << "%; inst-433 phi " << b.phi << " delta " << format_number(b.delta_pct, 4) << "%";
  const bool ok = std::round(a.phi) == 172 && std::round(a.phi_wt) == 187 &&
                  std::abs(a.delta_pct - 8.72) < 0.005 && std::round(b.phi) == 156 &&
                  std::abs(b.delta_pct) < 0.005;
  return ok ? pass(d.str()) : fail(d.str());
}

Outcome separation_speed() {
  const Instance inst = generate_rnd({200, 50, 0.3, 31337, 10});
  SolverParams params;
  params.time_limit = 20.0;
  params.max_nodes = 2000;
  BendersOptions opts;
  opts.record_points = true;
  const BendersResult run = solve_pup_benders(inst, params, opts);
  std::vector<LeaderDecision> points = run.stats.points;
  if (points.size() > 40) points.resize(40);
  if (points.empty()) return fail("no integer master points recorded");
  // Warm both routes once so neither pays first-touch costs in the timing.
  replay_separation(inst, {points.front()}, SeparationRoute::kAnalytic);
  replay_separation(inst, {points.front()}, SeparationRoute::kLp);
  const SeparationStats a = replay_separation(inst, points, SeparationRoute::kAnalytic);
  const SeparationStats l = replay_separation(inst, points, SeparationRoute::kLp);
  const double ratio = l.lp_seconds / std::max(a.analytic_seconds, 1e-12);
  std::ostringstream d;
  d << "benders-as " << to_string(run.milp.status) << " after " << run.milp.nodes << " nodes; "
    << points.size() << " integer points x 200 customers: analytic " << a.analytic_seconds
    << " s, lp " << l.lp_seconds << " s, ratio " << format_number(ratio, 4);
  return ratio >= 10.0 ? pass(d.str()) : fail(d.str());
}

// Per-instance CPU seconds for PMPUP: PDRM, SRM, Benders, Benders-AS.
constexpr std::array<std::array<double, 4>, 30> kPmpupCpu = {{
    {783.9, 451.4, 266.8, 220.0},   {211.4, 124.5, 260.4, 198.4},
    {436.5, 97.4, 21.4, 12.9},      {1546.8, 322.8, 282.2, 195.5},
    {688.2, 219.6, 278.6, 196.7},   {905.4, 269.6, 342.3, 211.7},
    {479.3, 207.6, 241.1, 198.1},   {918.7, 245.7, 226.6, 138.7},
    {682.4, 218.9, 270.5, 170.3},   {1084.1, 398.4, 255.5, 201.2},
    {1039.5, 581.6, 274.3, 196.2},  {1527.7, 650.0, 325.1, 207.7},
    {257.5, 281.3, 196.4, 119.6},   {525.8, 365.3, 255.4, 196.9},
    {734.1, 265.6, 220.9, 122.1},   {883.7, 264.8, 223.4, 131.9},
    {439.9, 284.3, 337.3, 183.7},   {699.9, 280.5, 280.2, 165.1},
    {933.6, 336.8, 311.5, 146.4},   {692.4, 128.7, 304.6, 144.7},
    {405.0, 127.8, 291.9, 142.7},   {500.8, 230.3, 290.4, 154.9},
    {239.6, 100.8, 195.3, 123.5},   {291.5, 116.3, 226.6, 153.1},
    {633.4, 296.6, 331.6, 184.2},   {1506.0, 544.5, 292.2, 205.2},
    {637.3, 112.1, 203.0, 125.2},   {754.7, 200.4, 262.1, 143.7},
    {616.5, 235.0, 306.9, 143.6},   {779.9, 257.0, 328.8, 178.9},
}};

Outcome metric_formulas() {
  std::array<double, 4> avg{};
  for (const auto& row : kPmpupCpu)
    for (std::size_t k = 0; k < 4; ++k) avg[k] += row[k] / static_cast<double>(kPmpupCpu.size());
  const std::array<double, 3> expected{344.46, 67.23, 60.87};
  std::ostringstream d;
  bool ok = true;
  d << "ARI";
  for (std::size_t k = 0; k < 3; ++k) {
    const double ari = compute_ari(avg[k], avg[3]);
    ok = ok && std::abs(ari - expected[k]) <= 0.01;
    d << ' ' << format_number(ari, 5);
  }
  // The printed AVG row is rounded to 0.1 s; report what it gives for reference.
  d << " (from printed AVG row: " << format_number(compute_ari(727.9, 163.8), 5) << ' '
    << format_number(compute_ari(273.9, 163.8), 5) << ' '
    << format_number(compute_ari(263.4, 163.8), 5) << ")";

  struct GapCase {
    double zopt, zbb;
    std::optional<double> want;
  };
  const std::vector<GapCase> gaps = {{100, 99, 100.0 / 99.0},
                                     {50, 50, 0.0},
                                     {99, 100, 1.0},
                                     {-90, -100, 10.0},
                                     {5, 0, std::nullopt}};
  int gap_bad = 0;
  for (const auto& g : gaps) {
    const auto got = compute_rgap(g.zopt, g.zbb);
    if (got.has_value() != g.want.has_value() || (got && std::abs(*got - *g.want) > 1e-12)) {
      ++gap_bad;
    }
  }
  if (reported_rgap(0.005) != 0.0 || reported_rgap(0.02) != 0.02) ++gap_bad;
  d << "; rgap " << gaps.size() + 1 << " cases, " << gap_bad << " wrong";
  return ok && gap_bad == 0 ? pass(d.str()) : fail(d.str());
}

std::string run_capture(const std::string& cmd) {
  std::string out;
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(cmd.c_str(), "r"), pclose);
  if (!pipe) return out;
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), static_cast<int>(buf.size()), pipe.get()) != nullptr) {
    out += buf.data();
  }
  return out;
}

// Drops the cpu_s column (the only timing-dependent field) from CSV output.
std::string without_cpu(const std::string& csv) {
  std::istringstream in(csv);
  std::ostringstream out;
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> f;
    std::stringstream ls(line);
    for (std::string t; std::getline(ls, t, ',');) f.push_back(t);
    for (std::size_t k = 0; k < f.size(); ++k) {
      if (k == 4) continue;
      out << f[k] << ',';
    }
    out << '\n';
  }
  return out.str();
}

Outcome determinism(const std::string& cli) {
  int bad = 0;
  std::string first;
  const std::vector<Method> methods = {Method::kSrm,      Method::kPdrm, Method::kBendersLp,
                                       Method::kBendersAs, Method::kBrute, Method::kPmedianWt};
  int runs = 0;
  for (std::uint64_t seed : {3u, 17u, 99u}) {
    const RndSpec spec{14, 8, 0.5, seed, 3};
    if (write_native(generate_rnd(spec)) != write_native(generate_rnd(spec))) {
      ++bad;
      first = "generate_rnd seed " + std::to_string(seed);
    }
    const Instance inst = generate_rnd(spec);
    for (Method m : methods) {
      const RunRecord a = run_method(inst, m);
      const RunRecord b = run_method(inst, m);
      ++runs;
      if (a.objective != b.objective || !(a.decision == b.decision) || a.nodes != b.nodes ||
          a.cuts != b.cuts || a.status != b.status) {
        if (bad++ == 0) first = inst.name + " " + to_string(m);
      }
    }
  }
  std::ostringstream d;
  d << runs << " repeated library runs";
  if (!cli.empty()) {
    const std::string tmp =
        (std::filesystem::temp_directory_path() / "pupfl_acceptance_sol").string();
    int cli_runs = 0;
    for (const char* m : {"benders-as", "benders-lp", "srm"}) {
      const std::string base = "'" + cli + "' solve --gen-rnd 30x12:0.3:2026 --p 4 --method " + m;
      const std::string o1 = run_capture(base + " --out '" + tmp + "1'");
      const std::string o2 = run_capture(base + " --out '" + tmp + "2'");
      ++cli_runs;
      std::string s1 = read_file(tmp + "1"), s2 = read_file(tmp + "2");
      auto strip = [](std::string s) {
        const auto at = s.find("\ncpu_s ");
        if (at != std::string::npos) s.erase(at, s.find('\n', at + 1) - at);
        return s;
      };
      if (o1.empty() || without_cpu(o1) != without_cpu(o2) || strip(s1) != strip(s2)) {
        if (bad++ == 0) first = std::string("cli solve ") + m;
      }
    }
    std::filesystem::remove(tmp + "1");
    std::filesystem::remove(tmp + "2");
    d << ", " << cli_runs << " repeated CLI solves";
  } else {
    d << " (CLI path not given; command-level runs not checked)";
  }
  d << ", " << bad << " differences";
  return bad == 0 ? pass(d.str()) : fail(d.str() + "; first: " + first);
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  const std::vector<Instance> sweep = sweep_instances();
  const std::vector<std::pair<std::string, std::function<Outcome()>>> checks = {
      {"oracle equivalence", [&] { return oracle_equivalence(sweep); }},
      {"method cross-agreement", [&] { return cross_agreement(sweep); }},
      {"subproblem LP integrality", subproblem_integrality},
      {"analytic separation", analytic_separation},
      {"PMPUP reproduction", pmpup_reproduction},
      {"separation speed", separation_speed},
      {"metric formulas", metric_formulas},
      {"determinism", [&] { return determinism(cli); }},
  };
  int failures = 0;
  for (std::size_t k = 0; k < checks.size(); ++k) {
    Outcome o;
    try {
      o = checks[k].second();
    } catch (const std::exception& e) {
      o = fail(std::string("exception: ") + e.what());
    }
    const char* tag = o.kind == Outcome::kPass ? "PASS" : o.kind == Outcome::kFail ? "FAIL" : "SKIP";
    if (o.kind == Outcome::kFail) ++failures;
    std::cout << "[" << tag << "] " << k + 1 << ". " << checks[k].first << ": " << o.detail
              << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
