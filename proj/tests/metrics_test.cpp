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


#include "pupfl/metrics.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace pupfl {
namespace {

TEST(Rgap, Examples) {
  EXPECT_NEAR(*compute_rgap(100, 99), 1.0101, 1e-4);
  EXPECT_EQ(*compute_rgap(42, 42), 0.0);
  EXPECT_FALSE(compute_rgap(3, 0).has_value());
  EXPECT_EQ(reported_rgap(0.009), 0.0);
  EXPECT_EQ(reported_rgap(0.5), 0.5);
}

TEST(Ari, Examples) {
  EXPECT_NEAR(compute_ari(273.9, 163.8), 67.216, 1e-3);
  EXPECT_EQ(compute_ari(10, 10), 0.0);
  EXPECT_THROW(compute_ari(1, 0), std::invalid_argument);
}

TEST(Delta, Examples) {
  EXPECT_NEAR(compute_delta(187, 172), 8.7209, 1e-4);
  EXPECT_EQ(compute_delta(156, 156), 0.0);
  EXPECT_TRUE(std::isinf(compute_delta(1, 0)));
}

}  // namespace
}  // namespace pupfl
