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

// Problem data for the P-median problem with user preferences.
//
// A leader opens exactly P of the candidate facilities J. Every customer i
// then patronizes the open facility with the smallest disutility g[i][j],
// and the leader pays the service cost c[i][j] of that facility. The
// normalized disutility pi[i][j] = g[i][j] / max_k g[i][k] lies in (0, 1]
// and is what every formulation in this library works with.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pupfl {

class InstanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw InstanceError("ragged matrix literal");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static Matrix from_rows(const std::vector<std::vector<double>>& rows) {
    Matrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != m.cols_) throw InstanceError("ragged matrix rows");
      std::copy(rows[i].begin(), rows[i].end(), m.data_.begin() + i * m.cols_);
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }

  const std::vector<double>& data() const { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct Instance {
  std::size_t n_customers = 0;
  std::size_t n_facilities = 0;
  Matrix cost;        // c, |I| x |J|, nonnegative
  Matrix disutility;  // g, |I| x |J|, positive, distinct within a row
  Matrix pi;          // g normalized by its row maximum
  int p = 0;
  std::string name;
  std::vector<std::string> customer_labels;
  std::vector<std::string> facility_labels;
};

// Set of open facilities, kept sorted ascending.
class LeaderDecision {
 public:
  LeaderDecision() = default;
  explicit LeaderDecision(std::vector<int> open) : open_(std::move(open)) {
    std::sort(open_.begin(), open_.end());
    if (std::adjacent_find(open_.begin(), open_.end()) != open_.end()) {
      throw InstanceError("leader decision lists a facility twice");
    }
  }

  // Facilities with value above 0.5 are open.
  static LeaderDecision from_binary(std::span<const double> x) {
    std::vector<int> open;
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (x[j] > 0.5) open.push_back(static_cast<int>(j));
    }
    return LeaderDecision(std::move(open));
  }

  std::vector<double> to_binary(std::size_t n_facilities) const {
    std::vector<double> x(n_facilities, 0.0);
    for (int j : open_) x.at(static_cast<std::size_t>(j)) = 1.0;
    return x;
  }

  const std::vector<int>& open() const { return open_; }
  std::size_t size() const { return open_.size(); }
  bool empty() const { return open_.empty(); }
  bool is_open(int j) const { return std::binary_search(open_.begin(), open_.end(), j); }

  friend bool operator==(const LeaderDecision&, const LeaderDecision&) = default;

 private:
  std::vector<int> open_;
};

inline std::vector<double> normalize_row(std::span<const double> g_row) {
  if (g_row.empty()) throw InstanceError("cannot normalize an empty row");
  double largest = 0.0;
  for (double v : g_row) {
    if (!(v > 0.0)) throw InstanceError("disutilities must be positive");
    largest = std::max(largest, v);
  }
  std::vector<double> out(g_row.size());
  for (std::size_t j = 0; j < g_row.size(); ++j) out[j] = g_row[j] / largest;
  return out;
}

// Lists every violated data requirement. An empty result means the instance
// is usable by every solver in the library.
inline std::vector<std::string> validate(const Instance& inst) {
  std::vector<std::string> violations;
  const std::size_t ni = inst.n_customers;
  const std::size_t nj = inst.n_facilities;
  if (inst.cost.rows() != ni || inst.cost.cols() != nj) {
    violations.push_back("cost matrix shape does not match counts");
  }
  if (inst.disutility.rows() != ni || inst.disutility.cols() != nj) {
    violations.push_back("disutility matrix shape does not match counts");
  }
  if (!violations.empty()) return violations;
  if (nj == 0) violations.push_back("no candidate facilities");
  if (ni == 0) violations.push_back("no customers");
  if (inst.p < 1 || static_cast<std::size_t>(inst.p) > nj) {
    std::ostringstream os;
    os << "p=" << inst.p << " out of range [1, " << nj << "]";
    violations.push_back(os.str());
  }
  for (std::size_t i = 0; i < ni; ++i) {
    for (std::size_t j = 0; j < nj; ++j) {
      if (inst.cost(i, j) < 0.0) {
        std::ostringstream os;
        os << "negative cost at (" << i << "," << j << ")";
        violations.push_back(os.str());
      }
      if (!(inst.disutility(i, j) > 0.0)) {
        std::ostringstream os;
        os << "nonpositive disutility at (" << i << "," << j << ")";
        violations.push_back(os.str());
      }
    }
    std::vector<std::size_t> order(nj);
    std::iota(order.begin(), order.end(), std::size_t{0});
    const auto g = inst.disutility.row(i);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return g[a] < g[b]; });
    for (std::size_t k = 1; k < nj; ++k) {
      if (g[order[k]] == g[order[k - 1]]) {
        std::ostringstream os;
        os << "row " << i << ": g duplicates at (" << std::min(order[k - 1], order[k]) << ","
           << std::max(order[k - 1], order[k]) << ")";
        violations.push_back(os.str());
        break;
      }
    }
  }
  return violations;
}

inline Instance build_instance(const Matrix& c, const Matrix& g, int p, std::string name = {}) {
  if (c.rows() != g.rows() || c.cols() != g.cols()) {
    throw InstanceError("cost and disutility matrices differ in shape");
  }
  Instance inst;
  inst.n_customers = c.rows();
  inst.n_facilities = c.cols();
  inst.cost = c;
  inst.disutility = g;
  inst.p = p;
  inst.name = std::move(name);
  const auto violations = validate(inst);
  if (!violations.empty()) {
    std::string msg = "invalid instance:";
    for (const auto& v : violations) msg += "\n  " + v;
    throw InstanceError(msg);
  }
  inst.pi = Matrix(inst.n_customers, inst.n_facilities);
  for (std::size_t i = 0; i < inst.n_customers; ++i) {
    const auto row = normalize_row(g.row(i));
    std::copy(row.begin(), row.end(), inst.pi.row(i).begin());
  }
  return inst;
}

// Deterministic tiebreak for rows with repeated disutilities: g[i][j] +=
// j * 1e-9 * max_k g[i][k]. Only applied on explicit request.
inline Matrix perturb_ties(const Matrix& g) {
  Matrix out = g;
  for (std::size_t i = 0; i < g.rows(); ++i) {
    const auto row = g.row(i);
    const double largest = row.empty() ? 0.0 : *std::max_element(row.begin(), row.end());
    const double eps = 1e-9 * largest;
    for (std::size_t j = 0; j < g.cols(); ++j) out(i, j) += static_cast<double>(j) * eps;
  }
  return out;
}

}  // namespace pupfl
