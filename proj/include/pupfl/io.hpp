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

// Instance sources: the random RND generator, OR-Library "cap" files,
// PMPUP library files and the native text format.
//
// Native format (version 1). Blank lines and lines whose first non-blank
// character is '#' are ignored; tokens are separated by arbitrary
// whitespace. Keys may appear in any order after the header, but the counts
// must precede the matrices:
//
//   pup-instance 1
//   name inst-7                 (optional, single token)
//   n_customers 2
//   n_facilities 3
//   p 1
//   customer_labels a b         (optional)
//   facility_labels u v w       (optional)
//   c
//   <n_customers * n_facilities costs, row-major>
//   g
//   <n_customers * n_facilities disutilities, row-major>
//
// pi is never stored; it is recomputed on read. Numbers are written with 17
// significant digits, so a write/read cycle reproduces every double.

#pragma once

#include <cmath>
#include <cstdint>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <istream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pupfl/instance.hpp"
#include "pupfl/rng.hpp"

namespace pupfl {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct RndSpec {
  std::size_t n_customers = 0;
  std::size_t n_facilities = 0;
  double delta = 0.0;
  std::uint64_t seed = 0;
  int p = 1;
};

namespace detail {

struct Token {
  std::string text;
  int line;
};

inline std::vector<Token> tokenize(std::string_view text, bool skip_comments) {
  std::vector<Token> out;
  int line = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    const std::string_view ln =
        text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    ++line;
    const std::size_t first = ln.find_first_not_of(" \t\r\f\v");
    if (!(skip_comments && first != std::string_view::npos && ln[first] == '#')) {
      std::size_t i = 0;
      while (i < ln.size()) {
        while (i < ln.size() && std::isspace(static_cast<unsigned char>(ln[i]))) ++i;
        std::size_t j = i;
        while (j < ln.size() && !std::isspace(static_cast<unsigned char>(ln[j]))) ++j;
        if (j > i) out.push_back({std::string(ln.substr(i, j - i)), line});
        i = j;
      }
    }
    if (eol == std::string_view::npos) break;
    pos = eol + 1;
  }
  return out;
}

inline double to_double(const Token& t, const char* field) {
  const char* begin = t.text.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || std::isnan(v)) {
    throw ParseError(std::string("expected a number for ") + field + ", got '" + t.text + "'",
                     t.line);
  }
  return v;
}

inline long long to_integer(const Token& t, const char* field) {
  const double v = to_double(t, field);
  if (v != std::floor(v) || std::abs(v) > 9e15) {
    throw ParseError(std::string("expected an integer for ") + field + ", got '" + t.text + "'",
                     t.line);
  }
  return static_cast<long long>(v);
}

class TokenCursor {
 public:
  TokenCursor(std::vector<Token> tokens, std::string source)
      : tokens_(std::move(tokens)), source_(std::move(source)) {}

  bool done() const { return pos_ >= tokens_.size(); }

  const Token& next(const char* field) {
    if (done()) {
      const int line = tokens_.empty() ? 0 : tokens_.back().line;
      throw ParseError(source_ + ": unexpected end of input while reading " + field, line);
    }
    return tokens_[pos_++];
  }

  double number(const char* field) { return to_double(next(field), field); }
  long long integer(const char* field) { return to_integer(next(field), field); }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::string source_;
};

// g drawn uniformly from [(1 - delta) l, (1 + delta) l], one draw per entry,
// row-major. With delta = 0 the result is l exactly.
inline Matrix perturbed_disutility(const Matrix& l, double delta, CounterRng& rng) {
  Matrix g(l.rows(), l.cols());
  for (std::size_t i = 0; i < l.rows(); ++i) {
    for (std::size_t j = 0; j < l.cols(); ++j) {
      const double u = rng.uniform01();
      g(i, j) = l(i, j) * (1.0 - delta + 2.0 * delta * u);
    }
  }
  return g;
}

inline void check_delta(double delta) {
  if (!(delta >= 0.0 && delta < 1.0)) {
    throw InstanceError("delta must lie in [0, 1), got " + std::to_string(delta));
  }
}

}  // namespace detail

// Random RND instance. Draw order: customer coordinates (x, y per customer),
// facility coordinates, customer demands, then g row-major.
inline Instance generate_rnd(const RndSpec& spec) {
  detail::check_delta(spec.delta);
  if (spec.n_customers == 0 || spec.n_facilities == 0) {
    throw InstanceError("RND instance needs at least one customer and one facility");
  }
  CounterRng rng(spec.seed);
  std::vector<double> cx(spec.n_customers), cy(spec.n_customers);
  std::vector<double> fx(spec.n_facilities), fy(spec.n_facilities);
  for (std::size_t i = 0; i < spec.n_customers; ++i) {
    cx[i] = rng.uniform(0.0, 100.0);
    cy[i] = rng.uniform(0.0, 100.0);
  }
  for (std::size_t j = 0; j < spec.n_facilities; ++j) {
    fx[j] = rng.uniform(0.0, 100.0);
    fy[j] = rng.uniform(0.0, 100.0);
  }
  std::vector<double> demand(spec.n_customers);
  for (auto& d : demand) d = rng.uniform(0.0, 10.0);
  Matrix l(spec.n_customers, spec.n_facilities);
  Matrix c(spec.n_customers, spec.n_facilities);
  for (std::size_t i = 0; i < spec.n_customers; ++i) {
    for (std::size_t j = 0; j < spec.n_facilities; ++j) {
      l(i, j) = std::hypot(cx[i] - fx[j], cy[i] - fy[j]);
      c(i, j) = demand[i] * l(i, j);
    }
  }
  const Matrix g = detail::perturbed_disutility(l, spec.delta, rng);
  std::ostringstream name;
  name << "rnd-" << spec.n_customers << "x" << spec.n_facilities << "-d" << spec.delta << "-s"
       << spec.seed;
  return build_instance(c, g, spec.p, name.str());
}

// OR-Library capacitated/uncapacitated warehouse file. Capacities and fixed
// costs are skipped (capa/capb/capc carry the literal word "capacity").
inline Instance parse_orlib_cap(std::string_view text, double delta, std::uint64_t seed, int p,
                                std::string name = "orlib") {
  detail::check_delta(delta);
  detail::TokenCursor cur(detail::tokenize(text, false), "orlib");
  const long long nf = cur.integer("number of facilities");
  const long long nc = cur.integer("number of customers");
  if (nf <= 0 || nc <= 0) throw ParseError("orlib: malformed header counts", 1);
  for (long long j = 0; j < nf; ++j) {
    cur.next("facility capacity");
    cur.number("facility fixed cost");
  }
  Matrix c(static_cast<std::size_t>(nc), static_cast<std::size_t>(nf));
  Matrix l(c.rows(), c.cols());
  for (std::size_t i = 0; i < c.rows(); ++i) {
    const auto& dtok = cur.next("customer demand");
    const double d = detail::to_double(dtok, "customer demand");
    if (d < 0.0) throw ParseError("orlib: negative demand", dtok.line);
    for (std::size_t j = 0; j < c.cols(); ++j) {
      const auto& tok = cur.next("allocation cost");
      c(i, j) = detail::to_double(tok, "allocation cost");
      if (d > 0.0) {
        l(i, j) = c(i, j) / d;
      } else if (c(i, j) == 0.0) {
        l(i, j) = 0.0;
      } else {
        throw ParseError("orlib: customer " + std::to_string(i) +
                             " has zero demand but a positive allocation cost",
                         tok.line);
      }
    }
  }
  if (!cur.done()) {
    throw ParseError("orlib: count mismatch, trailing data after " + std::to_string(nc) +
                     " customers");
  }
  CounterRng rng(seed);
  const Matrix g = detail::perturbed_disutility(l, delta, rng);
  return build_instance(c, g, p, std::move(name));
}

enum class PmpupLayout { kFacilityMajor, kCustomerMajor };

// Default number of open facilities for PMPUP instances.
inline int pmpup_default_p(std::string_view instance_id) {
  return instance_id.find("533") != std::string_view::npos ? 13 : 14;
}

// PMPUP library file: a header "n_facilities n_customers [p]" followed by
// the cost matrix and then the (cardinal, lower is better) preference
// matrix. Both matrices have one row per facility in the facility-major
// layout and one row per customer in the customer-major layout.
// break_ties applies perturb_ties to the preferences before validation.
inline Instance parse_pmpup(std::string_view text, std::string instance_id = "pmpup",
                            int p_override = 0,
                            PmpupLayout layout = PmpupLayout::kFacilityMajor,
                            bool break_ties = false) {
  auto tokens = detail::tokenize(text, false);
  if (tokens.size() < 2) throw ParseError("pmpup: missing header");
  const int header_line = tokens.front().line;
  std::size_t header_len = 0;
  while (header_len < tokens.size() && tokens[header_len].line == header_line) ++header_len;
  if (header_len != 2 && header_len != 3) {
    throw ParseError("pmpup: header must hold 2 or 3 integers", header_line);
  }
  detail::TokenCursor cur(std::move(tokens), "pmpup");
  const long long nf = cur.integer("number of facilities");
  const long long nc = cur.integer("number of customers");
  long long header_p = 0;
  if (header_len == 3) header_p = cur.integer("p");
  if (nf <= 0 || nc <= 0) throw ParseError("pmpup: malformed header counts", header_line);
  const auto ni = static_cast<std::size_t>(nc);
  const auto nj = static_cast<std::size_t>(nf);
  auto read_matrix = [&](const char* field) {
    Matrix m(ni, nj);
    if (layout == PmpupLayout::kFacilityMajor) {
      for (std::size_t j = 0; j < nj; ++j)
        for (std::size_t i = 0; i < ni; ++i) m(i, j) = cur.number(field);
    } else {
      for (std::size_t i = 0; i < ni; ++i)
        for (std::size_t j = 0; j < nj; ++j) m(i, j) = cur.number(field);
    }
    return m;
  };
  const Matrix c = read_matrix("cost matrix");
  const Matrix g = read_matrix("preference matrix");
  if (!cur.done()) throw ParseError("pmpup: trailing data after the preference matrix");
  int p = p_override > 0 ? p_override
                         : (header_p > 0 ? static_cast<int>(header_p) : pmpup_default_p(instance_id));
  return build_instance(c, break_ties ? perturb_ties(g) : g, p, std::move(instance_id));
}

inline std::string write_native(const Instance& inst) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "# P-median instance with user preferences\n";
  os << "pup-instance 1\n";
  if (!inst.name.empty()) os << "name " << inst.name << "\n";
  os << "n_customers " << inst.n_customers << "\n";
  os << "n_facilities " << inst.n_facilities << "\n";
  os << "p " << inst.p << "\n";
  if (!inst.customer_labels.empty()) {
    os << "customer_labels";
    for (const auto& s : inst.customer_labels) os << ' ' << s;
    os << "\n";
  }
  if (!inst.facility_labels.empty()) {
    os << "facility_labels";
    for (const auto& s : inst.facility_labels) os << ' ' << s;
    os << "\n";
  }
  auto dump = [&](const char* key, const Matrix& m) {
    os << key << "\n";
    for (std::size_t i = 0; i < m.rows(); ++i) {
      for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? " " : "") << m(i, j);
      os << "\n";
    }
  };
  dump("c", inst.cost);
  dump("g", inst.disutility);
  return os.str();
}

inline Instance read_native(std::string_view text, bool break_ties = false) {
  const auto tokens = detail::tokenize(text, true);
  if (tokens.empty()) throw ParseError("native: empty document");
  std::size_t pos = 0;
  auto next = [&](const char* field) -> const detail::Token& {
    if (pos >= tokens.size()) {
      throw ParseError(std::string("native: unexpected end of input while reading ") + field,
                       tokens.back().line);
    }
    return tokens[pos++];
  };
  const auto& magic = next("header");
  if (magic.text != "pup-instance") {
    throw ParseError("native: expected header 'pup-instance', got '" + magic.text + "'",
                     magic.line);
  }
  const auto& ver = next("version");
  if (detail::to_integer(ver, "version") != 1) {
    throw ParseError("native: unsupported version " + ver.text, ver.line);
  }
  std::optional<long long> ni, nj, p;
  std::optional<Matrix> c, g;
  std::string name;
  std::vector<std::string> clabels, flabels;
  auto read_labels = [&](std::vector<std::string>& out, int line) {
    while (pos < tokens.size() && tokens[pos].line == line) out.push_back(tokens[pos++].text);
  };
  auto read_matrix = [&](const char* field) {
    if (!ni || !nj) {
      throw ParseError(std::string("native: matrix ") + field + " appears before the counts",
                       tokens[pos - 1].line);
    }
    Matrix m(static_cast<std::size_t>(*ni), static_cast<std::size_t>(*nj));
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = detail::to_double(next(field), field);
    return m;
  };
  while (pos < tokens.size()) {
    const auto& key = next("key");
    if (key.text == "name") {
      name = next("name").text;
    } else if (key.text == "n_customers") {
      ni = detail::to_integer(next("n_customers"), "n_customers");
    } else if (key.text == "n_facilities") {
      nj = detail::to_integer(next("n_facilities"), "n_facilities");
    } else if (key.text == "p") {
      p = detail::to_integer(next("p"), "p");
    } else if (key.text == "customer_labels") {
      read_labels(clabels, key.line);
    } else if (key.text == "facility_labels") {
      read_labels(flabels, key.line);
    } else if (key.text == "c") {
      c = read_matrix("c");
    } else if (key.text == "g") {
      g = read_matrix("g");
    } else {
      throw ParseError("native: unknown field '" + key.text + "'", key.line);
    }
  }
  const int last = tokens.back().line;
  if (!ni) throw ParseError("native: missing field n_customers", last);
  if (!nj) throw ParseError("native: missing field n_facilities", last);
  if (!p) throw ParseError("native: missing field p", last);
  if (*ni <= 0 || *nj <= 0) throw ParseError("native: counts must be positive");
  if (!c) throw ParseError("native: missing field c (cost matrix)", last);
  if (!g) throw ParseError("native: missing field g (disutility matrix)", last);
  if (!clabels.empty() && clabels.size() != static_cast<std::size_t>(*ni)) {
    throw ParseError("native: customer_labels count does not match n_customers");
  }
  if (!flabels.empty() && flabels.size() != static_cast<std::size_t>(*nj)) {
    throw ParseError("native: facility_labels count does not match n_facilities");
  }
  Instance inst = build_instance(*c, break_ties ? perturb_ties(*g) : *g, static_cast<int>(*p), name);
  inst.customer_labels = std::move(clabels);
  inst.facility_labels = std::move(flabels);
  return inst;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace pupfl
