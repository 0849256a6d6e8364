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

// Exhaustive enumeration of all P-subsets. Slow and obviously correct.

#pragma once

#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "pupfl/follower.hpp"
#include "pupfl/instance.hpp"

namespace pupfl {

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// C(n, k), saturating at UINT64_MAX.
inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t t = 1; t <= k; ++t) {
    const std::uint64_t num = n - k + t;
    const std::uint64_t g = std::gcd(r, t);
    const std::uint64_t rr = r / g;
    const std::uint64_t tt = t / g;
    if (rr > std::numeric_limits<std::uint64_t>::max() / num) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    r = rr * num / tt;
  }
  return r;
}

struct BruteForceResult {
  LeaderDecision decision;
  FollowerResponse response;
  std::uint64_t subsets = 0;
};

// Visits subsets in lexicographic order; only a strictly smaller cost
// replaces the best, so ties go to the lexicographically first subset.
inline BruteForceResult brute_force(const Instance& inst, std::uint64_t max_subsets = 1000000) {
  const auto nj = static_cast<int>(inst.n_facilities);
  const int p = inst.p;
  if (p < 1 || p > nj) throw InstanceError("brute_force: p out of range");
  const std::uint64_t count = binomial(static_cast<std::uint64_t>(nj), static_cast<std::uint64_t>(p));
  if (count > max_subsets) {
    throw BudgetExceeded("brute_force: C(" + std::to_string(nj) + ", " + std::to_string(p) +
                         ") subsets exceed the budget of " + std::to_string(max_subsets));
  }
  std::vector<int> idx(static_cast<std::size_t>(p));
  std::iota(idx.begin(), idx.end(), 0);
  BruteForceResult best;
  double best_phi = std::numeric_limits<double>::infinity();
  for (;;) {
    LeaderDecision x(idx);
    FollowerResponse r = evaluate_leader(inst, x);
    ++best.subsets;
    if (r.phi_total < best_phi) {
      best_phi = r.phi_total;
      best.decision = std::move(x);
      best.response = std::move(r);
    }
    int k = p - 1;
    while (k >= 0 && idx[static_cast<std::size_t>(k)] == nj - p + k) --k;
    if (k < 0) break;
    ++idx[static_cast<std::size_t>(k)];
    for (int t = k + 1; t < p; ++t) {
      idx[static_cast<std::size_t>(t)] = idx[static_cast<std::size_t>(t - 1)] + 1;
    }
  }
  return best;
}

}  // namespace pupfl
