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

// Lower-level (customer) response to a set of open facilities.

#pragma once

#include <cstddef>
#include <iostream>
#include <span>
#include <vector>

#include "pupfl/instance.hpp"

namespace pupfl {

struct FollowerResponse {
  std::vector<int> chosen;
  std::vector<double> phi_per_customer;
  double phi_total = 0.0;
};

// Open facility with the smallest normalized disutility for customer i.
// Exact ties cannot occur on validated data; if floating point produces one
// anyway the lowest index wins and a warning is printed.
inline int most_preferred(const Instance& inst, std::span<const int> open, std::size_t i) {
  if (open.empty()) throw InstanceError("most_preferred: no open facility");
  const auto pi = inst.pi.row(i);
  int best = -1;
  bool tie = false;
  for (int j : open) {
    if (best < 0 || pi[j] < pi[best]) {
      best = j;
      tie = false;
    } else if (pi[j] == pi[best]) {
      tie = true;
      if (j < best) best = j;
    }
  }
  if (tie) {
    std::clog << "pupfl: warning: preference tie for customer " << i
              << ", picking facility " << best << "\n";
  }
  return best;
}

inline int most_preferred(const Instance& inst, const LeaderDecision& x, std::size_t i) {
  return most_preferred(inst, std::span<const int>(x.open()), i);
}

inline FollowerResponse evaluate_leader(const Instance& inst, const LeaderDecision& x) {
  if (x.size() != static_cast<std::size_t>(inst.p)) {
    throw InstanceError("evaluate_leader: expected " + std::to_string(inst.p) +
                        " open facilities, got " + std::to_string(x.size()));
  }
  for (int j : x.open()) {
    if (j < 0 || static_cast<std::size_t>(j) >= inst.n_facilities) {
      throw InstanceError("evaluate_leader: facility index out of range");
    }
  }
  FollowerResponse r;
  r.chosen.resize(inst.n_customers);
  r.phi_per_customer.resize(inst.n_customers);
  for (std::size_t i = 0; i < inst.n_customers; ++i) {
    const int m = most_preferred(inst, x, i);
    r.chosen[i] = m;
    r.phi_per_customer[i] = inst.cost(i, static_cast<std::size_t>(m));
    r.phi_total += r.phi_per_customer[i];
  }
  return r;
}

}  // namespace pupfl
