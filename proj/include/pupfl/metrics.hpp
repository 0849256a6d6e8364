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

// Report metrics: exit gap, average relative improvement, cost of ignoring
// preferences.

#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>

namespace pupfl {

// Relative exit gap |zbb - zopt| / |zbb| * 100, undefined when zbb = 0.
inline std::optional<double> compute_rgap(double zopt, double zbb) {
  if (zbb == 0.0 || !std::isfinite(zbb) || !std::isfinite(zopt)) return std::nullopt;
  return std::abs(zbb - zopt) / std::abs(zbb) * 100.0;
}

// Gaps below 0.01% are printed as zero.
inline double reported_rgap(double rgap_percent) {
  return rgap_percent < 0.01 ? 0.0 : rgap_percent;
}

// Average relative improvement of the baseline over a method, in percent.
inline double compute_ari(double avg_method, double avg_baseline) {
  if (!(avg_baseline > 0.0)) throw std::invalid_argument("compute_ari: baseline must be positive");
  return (avg_method - avg_baseline) / avg_baseline * 100.0;
}

// Extra cost of planning without preferences, (phi_wt - phi) / phi * 100.
inline double compute_delta(double phi_wt, double phi) {
  if (phi == 0.0) return phi_wt == 0.0 ? 0.0 : INFINITY;
  return (phi_wt - phi) / phi * 100.0;
}

}  // namespace pupfl
