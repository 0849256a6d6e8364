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

#pragma once

#include <cstdint>

namespace pupfl {

// Counter-based generator "splitmix64-ctr v1": draw k (k = 0, 1, ...) is
// the splitmix64 finalizer applied to seed + (k + 1) * 0x9E3779B97F4A7C15.
// Each draw is a pure function of (seed, k), so streams are reproducible
// across platforms and can be skipped ahead with `discard`.
class CounterRng {
 public:
  static constexpr const char* kName = "splitmix64-ctr";
  static constexpr int kVersion = 1;

  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t next_u64() { return at(seed_, counter_++); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  void discard(std::uint64_t n) { counter_ += n; }
  std::uint64_t counter() const { return counter_; }

  static std::uint64_t at(std::uint64_t seed, std::uint64_t k) {
    std::uint64_t z = seed + (k + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace pupfl
