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

// pupfl: solve, generate, convert and benchmark P-median instances with
// customer preferences.
//
// Exit status: 0 success, 2 solver failure, 3 bad input.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "pupfl.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitSolver = 2;
constexpr int kExitInput = 3;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Source {
  std::string path;
  std::string gen_rnd;  // "IxJ:delta:seed"
  std::string format = "native";
  std::string layout = "facility-major";
  int p = 0;
  double delta = 0.0;
  std::uint64_t seed = 1;
  bool break_ties = false;
};

void add_source_flags(CLI::App* cmd, Source& s, bool allow_gen) {
  cmd->add_option("--instance", s.path, "Instance file");
  if (allow_gen) {
    cmd->add_option("--gen-rnd", s.gen_rnd, "Random instance spec IxJ:delta:seed, e.g. 20x10:0.3:7");
  }
  cmd->add_option("--format", s.format, "Instance format")
      ->check(CLI::IsMember({"native", "orlib", "pmpup"}));
  cmd->add_option("--layout", s.layout, "PMPUP matrix layout")
      ->check(CLI::IsMember({"facility-major", "customer-major"}));
  cmd->add_option("--p", s.p, "Number of facilities to open (overrides the file)");
  cmd->add_option("--delta", s.delta, "Disutility perturbation for orlib input");
  cmd->add_option("--seed", s.seed, "Seed for orlib disutilities");
  cmd->add_flag("--break-ties", s.break_ties,
                "Add j * 1e-9 * max(g_i) to g_ij so repeated disutilities become distinct");
}

pupfl::RndSpec parse_rnd_spec(const std::string& text, int p) {
  pupfl::RndSpec spec;
  char x = 0, c1 = 0, c2 = 0;
  std::istringstream in(text);
  if (!(in >> spec.n_customers >> x >> spec.n_facilities >> c1 >> spec.delta >> c2 >>
        spec.seed) ||
      x != 'x' || c1 != ':' || c2 != ':' || !(in >> std::ws).eof()) {
    throw InputError("--gen-rnd expects IxJ:delta:seed, got '" + text + "'");
  }
  spec.p = p > 0 ? p : 1;
  return spec;
}

std::string stem_of(const std::string& path) { return fs::path(path).stem().string(); }

pupfl::Instance load(const Source& s) {
  if (!s.gen_rnd.empty()) {
    if (!s.path.empty()) throw InputError("give either --instance or --gen-rnd, not both");
    if (s.p <= 0) throw InputError("--gen-rnd needs --p");
    return pupfl::generate_rnd(parse_rnd_spec(s.gen_rnd, s.p));
  }
  if (s.path.empty()) throw InputError("missing --instance");
  const std::string text = pupfl::read_file(s.path);
  if (s.format == "orlib") {
    if (s.p <= 0) throw InputError("orlib input needs --p");
    return pupfl::parse_orlib_cap(text, s.delta, s.seed, s.p, stem_of(s.path));
  }
  if (s.format == "pmpup") {
    const auto layout = s.layout == "customer-major" ? pupfl::PmpupLayout::kCustomerMajor
                                                     : pupfl::PmpupLayout::kFacilityMajor;
    return pupfl::parse_pmpup(text, stem_of(s.path), s.p, layout, s.break_ties);
  }
  pupfl::Instance inst = pupfl::read_native(text, s.break_ties);
  if (inst.name.empty()) inst.name = stem_of(s.path);
  if (s.p > 0) {
    inst.p = s.p;
    const auto bad = pupfl::validate(inst);
    if (!bad.empty()) throw pupfl::InstanceError(bad.front());
  }
  return inst;
}

nlohmann::json finite_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

struct SolveFlags {
  std::string method = "benders-as";
  std::string route;
  double time_limit = 7200.0;
  std::string out;
  std::string node_log;
  bool relax_y = false;
  bool no_greedy = false;
  std::size_t pdrm_max_pairs = 2500;
};

void add_solver_flags(CLI::App* cmd, SolveFlags& f) {
  cmd->add_option("--time-limit", f.time_limit, "Seconds per solve")->check(CLI::NonNegativeNumber);
  cmd->add_flag("--relax-y", f.relax_y, "Solve srm with continuous assignment variables");
  cmd->add_flag("--no-greedy", f.no_greedy, "Skip the greedy starting solution in benders");
  cmd->add_option("--pdrm-max-pairs", f.pdrm_max_pairs,
                  "Refuse pdrm above this many customer-facility pairs (0: no cap)");
}

pupfl::RunOptions run_options(const SolveFlags& f, double delta) {
  pupfl::RunOptions o;
  o.params.time_limit = f.time_limit;
  o.srm_relax_y = f.relax_y;
  o.greedy_start = !f.no_greedy;
  o.pdrm_max_pairs = f.pdrm_max_pairs;
  o.delta = delta;
  return o;
}

pupfl::Method resolve_method(const SolveFlags& f) {
  std::string name = f.method;
  if (name == "benders") name = f.route == "lp" ? "benders-lp" : "benders-as";
  if (!f.route.empty() && name.rfind("benders", 0) == 0) {
    name = f.route == "lp" ? "benders-lp" : "benders-as";
  }
  const auto m = pupfl::parse_method(name);
  if (!m) throw InputError("unknown method '" + f.method + "'");
  return *m;
}

int cmd_solve(const Source& src, const SolveFlags& f) {
  const pupfl::Instance inst = load(src);
  const pupfl::Method method = resolve_method(f);
  pupfl::RunOptions opt = run_options(f, src.gen_rnd.empty() ? src.delta
                                                             : parse_rnd_spec(src.gen_rnd, 1).delta);
  std::ofstream log;
  if (!f.node_log.empty()) {
    log.open(f.node_log);
    if (!log) throw InputError("cannot write '" + f.node_log + "'");
    opt.params.node_log = [&log](const pupfl::NodeRecord& r) {
      nlohmann::json j;
      j["node"] = r.node;
      j["depth"] = r.depth;
      j["event"] = r.event;
      j["lp_objective"] = finite_or_null(r.lp_objective);
      j["best_bound"] = finite_or_null(r.best_bound);
      j["incumbent"] = finite_or_null(r.incumbent);
      j["pool_size"] = r.pool_size;
      j["seconds"] = r.seconds;
      log << j.dump() << '\n';
    };
  }
  const pupfl::RunRecord rec = pupfl::run_method(inst, method, opt);
  std::cout << pupfl::kCsvHeader << '\n' << pupfl::csv_row(rec) << '\n';
  if (!f.out.empty()) write_text(f.out, pupfl::solution_document(rec));
  return 0;
}

struct GenFlags {
  std::size_t customers = 0;
  std::size_t facilities = 0;
  double delta = 0.3;
  std::uint64_t seed = 1;
  int p = 1;
  int count = 1;
  std::string out;
};

int cmd_gen_rnd(const GenFlags& g) {
  if (g.count < 1) throw InputError("--count must be positive");
  if (g.count > 1) fs::create_directories(g.out);
  for (int k = 0; k < g.count; ++k) {
    const pupfl::Instance inst = pupfl::generate_rnd(
        {g.customers, g.facilities, g.delta, g.seed + static_cast<std::uint64_t>(k), g.p});
    const std::string path =
        g.count == 1 ? g.out : (fs::path(g.out) / (inst.name + ".pup")).string();
    write_text(path, pupfl::write_native(inst));
  }
  return 0;
}

int cmd_convert(const Source& src, const std::string& out, const std::string& name) {
  pupfl::Instance inst = load(src);
  if (!name.empty()) inst.name = name;
  write_text(out, pupfl::write_native(inst));
  return 0;
}

int cmd_compare(const std::string& dir, const std::string& methods_csv, const SolveFlags& f,
                int p_override, const std::string& out) {
  std::vector<std::string> methods;
  std::stringstream ss(methods_csv);
  for (std::string m; std::getline(ss, m, ',');) {
    if (!pupfl::parse_method(m)) throw InputError("unknown method '" + m + "'");
    methods.push_back(m);
  }
  if (!fs::is_directory(dir)) throw InputError("'" + dir + "' is not a directory");
  std::vector<std::string> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".pup") files.push_back(e.path().string());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw InputError("no .pup instances in '" + dir + "'");

  std::ostringstream report;
  report << pupfl::machine_fingerprint() << pupfl::kCsvHeader << '\n';
  std::vector<pupfl::RunRecord> runs;
  for (const auto& path : files) {
    Source s;
    s.path = path;
    s.p = p_override;
    const pupfl::Instance inst = load(s);
    for (const auto& m : methods) {
      runs.push_back(pupfl::run_method(inst, *pupfl::parse_method(m), run_options(f, 0.0)));
      report << pupfl::csv_row(runs.back()) << '\n';
      std::cerr << pupfl::csv_row(runs.back()) << '\n';
    }
  }
  report << pupfl::compare_summary(runs, methods);
  if (out.empty()) {
    std::cout << report.str();
  } else {
    write_text(out, report.str());
  }
  return 0;
}

int cmd_sensitivity(const Source& src, const std::string& p_list, const SolveFlags& f,
                    const std::string& out) {
  Source s = src;
  std::vector<int> ps;
  std::stringstream ss(p_list);
  for (std::string t; std::getline(ss, t, ',');) {
    try {
      ps.push_back(std::stoi(t));
    } catch (const std::exception&) {
      throw InputError("bad --p-list entry '" + t + "'");
    }
  }
  if (ps.empty()) throw InputError("--p-list is empty");
  if (s.p <= 0) s.p = ps.front();
  const pupfl::Instance inst = load(s);
  std::ostringstream report;
  report << pupfl::machine_fingerprint() << pupfl::kSensitivityHeader << '\n';
  for (int p : ps) {
    report << pupfl::sensitivity_row_csv(pupfl::sensitivity_at(inst, p, run_options(f, s.delta)))
           << '\n';
  }
  if (out.empty()) {
    std::cout << report.str();
  } else {
    write_text(out, report.str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact solvers for the P-median problem with customer preferences"};
  app.set_version_flag("--version", pupfl::kVersion);
  app.require_subcommand(1);

  Source solve_src;
  SolveFlags solve_flags;
  auto* solve = app.add_subcommand("solve", "Solve one instance");
  add_source_flags(solve, solve_src, true);
  add_solver_flags(solve, solve_flags);
  solve->add_option("--method", solve_flags.method, "srm|pdrm|benders-lp|benders-as|brute|pmedian-wt");
  solve->add_option("--route", solve_flags.route, "Separation route for benders")
      ->check(CLI::IsMember({"analytic", "lp"}));
  solve->add_option("--out", solve_flags.out, "Solution file");
  solve->add_option("--node-log", solve_flags.node_log, "JSON-lines node log");

  GenFlags gen;
  auto* gen_cmd = app.add_subcommand("gen-rnd", "Write random instances in native format");
  gen_cmd->add_option("--customers", gen.customers)->required()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--facilities", gen.facilities)->required()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--delta", gen.delta);
  gen_cmd->add_option("--seed", gen.seed);
  gen_cmd->add_option("--p", gen.p);
  gen_cmd->add_option("--count", gen.count, "Instances with consecutive seeds; --out is a directory");
  gen_cmd->add_option("--out", gen.out)->required();

  Source conv_src;
  std::string conv_out, conv_name;
  auto* conv = app.add_subcommand("convert", "Convert orlib/pmpup input to native format");
  add_source_flags(conv, conv_src, false);
  conv->add_option("--out", conv_out)->required();
  conv->add_option("--name", conv_name, "Instance name to store");

  std::string cmp_dir, cmp_methods = "srm,benders-lp,benders-as", cmp_out;
  int cmp_p = 0;
  SolveFlags cmp_flags;
  auto* cmp = app.add_subcommand("compare", "Run several methods on a directory of .pup files");
  cmp->add_option("--instances", cmp_dir)->required();
  cmp->add_option("--methods", cmp_methods, "Comma-separated method list");
  cmp->add_option("--p", cmp_p, "Override P for every instance");
  cmp->add_option("--out", cmp_out, "CSV report (default stdout)");
  add_solver_flags(cmp, cmp_flags);

  Source sens_src;
  std::string sens_plist, sens_out;
  SolveFlags sens_flags;
  auto* sens = app.add_subcommand("sensitivity", "Cost of ignoring preferences for several P");
  add_source_flags(sens, sens_src, false);
  sens->add_option("--p-list", sens_plist, "Comma-separated P values")->required();
  sens->add_option("--out", sens_out, "CSV report (default stdout)");
  add_solver_flags(sens, sens_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (*solve) return cmd_solve(solve_src, solve_flags);
    if (*gen_cmd) return cmd_gen_rnd(gen);
    if (*conv) return cmd_convert(conv_src, conv_out, conv_name);
    if (*cmp) return cmd_compare(cmp_dir, cmp_methods, cmp_flags, cmp_p, cmp_out);
    if (*sens) return cmd_sensitivity(sens_src, sens_plist, sens_flags, sens_out);
  } catch (const InputError& e) {
    std::cerr << "pupfl: " << e.what() << '\n';
    return kExitInput;
  } catch (const pupfl::ParseError& e) {
    std::cerr << "pupfl: " << e.what() << '\n';
    return kExitInput;
  } catch (const pupfl::InstanceError& e) {
    std::cerr << "pupfl: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "pupfl: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "pupfl: solver failure: " << e.what() << '\n';
    return kExitSolver;
  }
  return 0;
}
