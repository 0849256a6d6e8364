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

#include "pupfl/instance.hpp"

#include <gtest/gtest.h>

#include <random>

namespace pupfl {
namespace {

TEST(NormalizeRow, DividesByRowMaximum) {
  const std::vector<double> a{2, 7, 10};
  const auto out = normalize_row(a);
  EXPECT_DOUBLE_EQ(out[0], 0.2);
  EXPECT_DOUBLE_EQ(out[1], 0.7);
  EXPECT_EQ(out[2], 1.0);

  const std::vector<double> b{5};
  EXPECT_EQ(normalize_row(b), std::vector<double>{1.0});

  const std::vector<double> c{3, 4, 12};
  const auto oc = normalize_row(c);
  EXPECT_DOUBLE_EQ(oc[0], 0.25);
  EXPECT_DOUBLE_EQ(oc[1], 1.0 / 3.0);
  EXPECT_EQ(oc[2], 1.0);
}

TEST(NormalizeRow, RejectsEmptyAndNonpositive) {
  EXPECT_THROW(normalize_row(std::vector<double>{}), InstanceError);
  EXPECT_THROW(normalize_row(std::vector<double>{1.0, 0.0}), InstanceError);
  EXPECT_THROW(normalize_row(std::vector<double>{-2.0}), InstanceError);
}

TEST(NormalizeRow, IdempotentAndOrderPreserving) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.1, 100.0);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> g(1 + t % 9);
    for (auto& v : g) v = u(rng);
    const auto once = normalize_row(g);
    EXPECT_EQ(normalize_row(once), once);
    EXPECT_EQ(*std::max_element(once.begin(), once.end()), 1.0);
    EXPECT_EQ(std::min_element(g.begin(), g.end()) - g.begin(),
              std::min_element(once.begin(), once.end()) - once.begin());
  }
}

TEST(BuildInstance, ComputesPi) {
  const Instance inst = build_instance(Matrix{{5, 3}}, Matrix{{2, 7}}, 1);
  EXPECT_DOUBLE_EQ(inst.pi(0, 0), 2.0 / 7.0);
  EXPECT_EQ(inst.pi(0, 1), 1.0);
  EXPECT_EQ(inst.n_customers, 1u);
  EXPECT_EQ(inst.n_facilities, 2u);
}

TEST(BuildInstance, AcceptsDistinctRows) {
  EXPECT_NO_THROW(build_instance(Matrix{{1, 1}, {1, 1}}, Matrix{{1, 2}, {2, 1}}, 2));
}

TEST(BuildInstance, RejectsDuplicateDisutilities) {
  try {
    build_instance(Matrix{{1, 1}}, Matrix{{3, 3}}, 1);
    FAIL() << "expected InstanceError";
  } catch (const InstanceError& e) {
    EXPECT_NE(std::string(e.what()).find("row 0: g duplicates at (0,1)"), std::string::npos);
  }
}

TEST(BuildInstance, RejectsShapeMismatchAndBadP) {
  EXPECT_THROW(build_instance(Matrix{{1, 2}}, Matrix{{1, 2, 3}}, 1), InstanceError);
  EXPECT_THROW(build_instance(Matrix{{1, 2}}, Matrix{{1, 2}}, 0), InstanceError);
  EXPECT_THROW(build_instance(Matrix{{1, 2}}, Matrix{{1, 2}}, 3), InstanceError);
}

TEST(BuildInstance, ZeroCostIsAllowed) {
  EXPECT_NO_THROW(build_instance(Matrix{{0, 0}}, Matrix{{1, 2}}, 1));
}

TEST(Validate, ReportsEveryViolation) {
  Instance inst;
  inst.n_customers = 2;
  inst.n_facilities = 3;
  inst.cost = Matrix{{1, -1, 0}, {2, 2, 2}};
  inst.disutility = Matrix{{1, 1, 2}, {1, 2, 0}};
  inst.p = 4;
  const auto v = validate(inst);
  auto has = [&](const std::string& s) {
    return std::any_of(v.begin(), v.end(), [&](const std::string& x) { return x.find(s) != std::string::npos; });
  };
  EXPECT_TRUE(has("row 0: g duplicates at (0,1)"));
  EXPECT_TRUE(has("negative cost"));
  EXPECT_TRUE(has("nonpositive disutility at (1,2)"));
  EXPECT_TRUE(has("p=4 out of range"));
}

TEST(Validate, ValidInstanceIsClean) {
  const Instance inst = build_instance(Matrix{{4, 1, 3}}, Matrix{{2, 9, 4}}, 2);
  EXPECT_TRUE(validate(inst).empty());
}

TEST(PerturbTies, BreaksDuplicatesDeterministically) {
  const Matrix g = perturb_ties(Matrix{{3, 3, 3}});
  EXPECT_LT(g(0, 0), g(0, 1));
  EXPECT_LT(g(0, 1), g(0, 2));
  EXPECT_NO_THROW(build_instance(Matrix{{1, 1, 1}}, g, 1));
}

TEST(LeaderDecision, BinaryRoundTrip) {
  const LeaderDecision d({3, 0});
  EXPECT_EQ(d.open(), (std::vector<int>{0, 3}));
  EXPECT_EQ(LeaderDecision::from_binary(d.to_binary(5)), d);
  EXPECT_TRUE(d.is_open(3));
  EXPECT_FALSE(d.is_open(1));
  EXPECT_THROW(LeaderDecision({1, 1}), InstanceError);
}

}  // namespace
}  // namespace pupfl
