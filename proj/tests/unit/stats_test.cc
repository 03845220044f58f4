//
// Copyright 2026 The augwork Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "augwork/stats.h"

#include <cmath>
#include <string>
#include <vector>

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "augwork/error.h"
#include "augwork/lab.h"
#include "augwork/rng.h"
#include "test_util.h"

namespace augwork::stats {
namespace {

using augwork::testing::fixture_path;

TEST(TTest, IdenticalSamples) {
  const auto r = t_test({1, 2, 3}, {1, 2, 3});
  EXPECT_EQ(r.t_statistic, 0.0);
  EXPECT_DOUBLE_EQ(r.p_value, 1.0);
  EXPECT_FALSE(r.significant);
}

TEST(TTest, CommittedSmallFixture) {
  const auto a = lab::read_sample_column(fixture_path("ttest_a.csv"));
  const auto b = lab::read_sample_column(fixture_path("ttest_b.csv"));
  const auto r = t_test(a, b);
  EXPECT_NEAR(r.t_statistic, -1.0, 1e-12);
  EXPECT_EQ(r.degrees_of_freedom, 8.0);
  EXPECT_NEAR(r.p_value, 0.3466, 1e-4);
}

TEST(TTest, CommittedTwelveSampleFixture) {
  const auto a = lab::read_sample_column(fixture_path("ttest_n12_a.csv"));
  const auto b = lab::read_sample_column(fixture_path("ttest_n12_b.csv"));
  ASSERT_EQ(a.size(), 12u);
  EXPECT_NEAR(mean(a), 0.30, 0.03);
  EXPECT_NEAR(mean(b), 0.45, 0.03);
  const auto r = t_test(a, b);
  EXPECT_LT(r.p_value, 0.05);
  EXPECT_TRUE(r.significant);
}

TEST(TTest, MatchesFrozenReferenceValues) {
  const auto ref = nlohmann::json::parse(augwork::testing::read_file(fixture_path("ttest_reference.json")));
  std::vector<nlohmann::json> cases = {ref.at("small"), ref.at("n12")};
  for (const auto& c : ref.at("random")) cases.push_back(c);
  ASSERT_EQ(cases.size(), 102u);
  for (const auto& c : cases) {
    const auto r = t_test(c.at("a").get<std::vector<double>>(), c.at("b").get<std::vector<double>>());
    EXPECT_NEAR(r.t_statistic, c.at("t").get<double>(), 1e-6);
    EXPECT_NEAR(r.p_value, c.at("p").get<double>(), 1e-6);
    EXPECT_EQ(r.degrees_of_freedom, c.at("df").get<double>());
  }
}

TEST(TTest, MatchesBoostOnRandomPairs) {
  Rng rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> a(2 + rng.uniform_index(20)), b(2 + rng.uniform_index(20));
    const double shift = rng.uniform_real();
    for (auto& x : a) x = rng.uniform_real();
    for (auto& x : b) x = rng.uniform_real() + shift;
    const auto r = t_test(a, b);
    const boost::math::students_t dist(r.degrees_of_freedom);
    const double p = 2 * boost::math::cdf(boost::math::complement(dist, std::fabs(r.t_statistic)));
    EXPECT_NEAR(r.p_value, p, 1e-10);
  }
}

TEST(TTest, Antisymmetric) {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> a(5), b(7);
    for (auto& x : a) x = rng.uniform_real();
    for (auto& x : b) x = rng.uniform_real();
    const auto ab = t_test(a, b);
    const auto ba = t_test(b, a);
    EXPECT_DOUBLE_EQ(ab.t_statistic, -ba.t_statistic);
    EXPECT_DOUBLE_EQ(ab.p_value, ba.p_value);
    EXPECT_GE(ab.p_value, 0.0);
    EXPECT_LE(ab.p_value, 1.0);
  }
}

TEST(TTest, Errors) {
  try {
    t_test({1}, {1, 2});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInsufficientData);
  }
  try {
    t_test({1, 1}, {2, 2});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateVariance);
  }
  const auto same = t_test({3, 3, 3}, {3, 3});
  EXPECT_EQ(same.t_statistic, 0.0);
  EXPECT_EQ(same.p_value, 1.0);
}

TEST(IncompleteBeta, MatchesBoost) {
  Rng rng(8);
  for (int i = 0; i < 500; ++i) {
    const double a = 0.1 + 30 * rng.uniform_real();
    const double b = 0.1 + 30 * rng.uniform_real();
    const double x = rng.uniform_real();
    EXPECT_NEAR(incomplete_beta(x, a, b), boost::math::ibeta(a, b, x), 1e-10) << a << " " << b << " " << x;
  }
  EXPECT_EQ(incomplete_beta(0.0, 2, 3), 0.0);
  EXPECT_EQ(incomplete_beta(1.0, 2, 3), 1.0);
}

TEST(StudentT, TailProbabilities) {
  EXPECT_NEAR(student_t_two_sided(0.0, 5), 1.0, 1e-15);
  EXPECT_NEAR(student_t_two_sided(2.2281388519649385, 10), 0.05, 1e-9);
  EXPECT_NEAR(student_t_two_sided(-2.2281388519649385, 10), 0.05, 1e-9);
}

TEST(Significance, PaperPValuesAllFlagged) {
  const std::vector<double> p = {0.01, 0.02, 0.03, 0.03, 0.0001, 0.0001, 0.006, 0.016};
  for (bool s : flag_significance(p, 0.05)) EXPECT_TRUE(s);
  EXPECT_FALSE(flag_significance({0.05, 0.2}, 0.05)[0]);
}

TEST(Moments, MeanAndVariance) {
  EXPECT_DOUBLE_EQ(mean({1, 2, 3, 4}), 2.5);
  EXPECT_DOUBLE_EQ(sample_variance({1, 2, 3, 4}), 5.0 / 3.0);
}

}  // namespace
}  // namespace augwork::stats
