// Copyright 2026 The coopsim Authors
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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "coopsim/payoff.hpp"

namespace coopsim {
namespace {

const ValueFunctionParams kLog{ValueSpec::kLogarithmic, 20.0, 0.75, 0.65};
const ValueFunctionParams kPow{ValueSpec::kPower, 20.0, 0.75, 0.65};

TEST(IndividualValue, LogAtZeroIsZero) {
  EXPECT_EQ(individual_value(0.0, kLog), 0.0);
}

TEST(IndividualValue, LogAtEMinusOneIsTheta) {
  EXPECT_NEAR(individual_value(std::numbers::e - 1.0, kLog), 20.0, 1e-12);
}

TEST(IndividualValue, PowerOfSixteen) {
  EXPECT_NEAR(individual_value(16.0, kPow), 8.0, 1e-12);
}

TEST(IndividualValue, LogAtNinetyNine) {
  // Extended-precision reference for 20 ln(100).
  const long double ref = 20.0L * std::log(100.0L);
  EXPECT_NEAR(individual_value(99.0, kLog), static_cast<double>(ref), 1e-12);
  EXPECT_NEAR(individual_value(99.0, kLog), 92.103, 1e-3);
}

TEST(IndividualValue, RejectsNegativeContribution) {
  EXPECT_THROW(individual_value(-1.0, kLog), DomainError);
}

TEST(IndividualValue, ConcaveAtRandomPoints) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(0.5, 100.0);
  for (int k = 0; k < 100; ++k) {
    const double a = u(gen), h = 1e-3;
    for (const auto& p : {kLog, kPow}) {
      const double d2 = individual_value(a + h, p) - 2 * individual_value(a, p) +
                        individual_value(a - h, p);
      EXPECT_LT(d2, 0.0) << "a=" << a;
    }
  }
}

TEST(Synergy, GeometricMean) {
  const std::vector<double> a{4.0, 9.0};
  EXPECT_NEAR(synergy(a), 6.0, 1e-12);
}

TEST(Synergy, WeakestLinkZero) {
  const std::vector<double> a{5.0, 0.0};
  EXPECT_EQ(synergy(a), 0.0);
}

TEST(Synergy, CubeRoot) {
  const std::vector<double> a{1.0, 8.0, 27.0};
  EXPECT_NEAR(synergy(a), 6.0, 1e-12);
}

TEST(Synergy, AnyZeroAnnihilatesExactly) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  for (int k = 0; k < 200; ++k) {
    std::vector<double> a(2 + k % 5);
    for (double& x : a) x = u(gen);
    a[k % a.size()] = 0.0;
    EXPECT_EQ(synergy(a), 0.0);
  }
}

TEST(Synergy, EmptyIsAnError) {
  EXPECT_THROW(synergy(std::vector<double>{}), DomainError);
}

TEST(TotalValue, ZeroContributions) {
  const std::vector<double> a{0.0, 0.0};
  EXPECT_EQ(total_value(a, kLog), 0.0);
}

TEST(TotalValue, TwoAgentsAtEMinusOne) {
  const double x = std::numbers::e - 1.0;
  const std::vector<double> a{x, x};
  // Independent evaluation: 2 * 20 ln(e) + 0.65 * (e - 1).
  const long double ref = 40.0L + 0.65L * (std::numbers::e_v<long double> - 1);
  EXPECT_NEAR(total_value(a, kLog), static_cast<double>(ref), 1e-12);
  EXPECT_NEAR(total_value(a, kLog), 41.1168, 1e-4);
}

TEST(TotalValue, GammaZeroIsSumOfIndividualValues) {
  const std::vector<double> a{3.0, 7.0, 12.0};
  const auto p = kLog.with_gamma(0.0);
  double expect = 0.0;
  for (double x : a) expect += individual_value(x, p);
  EXPECT_DOUBLE_EQ(total_value(a, p), expect);
}

TEST(IntegratedUtility, HalfWeight) {
  const std::vector<double> pi{10.0, 20.0};
  const auto d = InterdependenceMatrix::from_rows({{1, 0.5}, {0.5, 1}});
  EXPECT_DOUBLE_EQ(integrated_utility(pi, d, 0), 20.0);
}

TEST(IntegratedUtility, ZeroCouplingIsPrivate) {
  const std::vector<double> pi{10.0, 20.0, -3.0};
  const InterdependenceMatrix d(3);
  for (std::size_t i = 0; i < 3; ++i)
    EXPECT_EQ(integrated_utility(pi, d, i), pi[i]);
}

TEST(IntegratedUtility, SlcdCalibration) {
  const std::vector<double> pi{100.0, 100.0};
  // Row 1 is the agent that weighs its partner at 0.86.
  const auto d = InterdependenceMatrix::from_rows({{1, 0.64}, {0.86, 1}});
  EXPECT_DOUBLE_EQ(integrated_utility(pi, d, 1), 186.0);
}

TEST(InterdependenceMatrix, DiagonalIsFixed) {
  InterdependenceMatrix d(2);
  EXPECT_THROW(d.set(0, 0, 0.5), DomainError);
  EXPECT_THROW(d.set(0, 1, 1.5), DomainError);
}

TEST(RewardVector, Private) {
  const std::vector<double> pi{10, 20}, m{0, 0};
  EXPECT_EQ(reward_vector(pi, m, InterdependenceMatrix(2, 0.5),
                          RewardMode::kPrivate),
            (std::vector<double>{10, 20}));
}

TEST(RewardVector, Cooperative) {
  const std::vector<double> pi{10, 20}, m{0, 0};
  EXPECT_EQ(reward_vector(pi, m, InterdependenceMatrix(2, 0.5),
                          RewardMode::kCooperative),
            (std::vector<double>{15, 15}));
}

TEST(RewardVector, Integrated) {
  const std::vector<double> pi{10, 20}, m{0, 0};
  EXPECT_EQ(reward_vector(pi, m, InterdependenceMatrix(2, 0.5),
                          RewardMode::kIntegrated),
            (std::vector<double>{20, 25}));
}

TEST(RewardVector, ModeIdentitiesOnRandomInputs) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-50.0, 150.0);
  for (int k = 0; k < 200; ++k) {
    const std::size_t n = 2 + k % 5;
    std::vector<double> pi(n), m(n, 0.0);
    for (double& x : pi) x = u(gen);
    const InterdependenceMatrix d(n);
    EXPECT_EQ(reward_vector(pi, m, d, RewardMode::kIntegrated),
              reward_vector(pi, m, d, RewardMode::kPrivate));
    const auto coop = reward_vector(pi, m, d, RewardMode::kCooperative);
    double sum_pi = 0.0, sum_r = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_EQ(coop[i], coop[0]);
      sum_pi += pi[i];
      sum_r += coop[i];
    }
    EXPECT_NEAR(sum_r, sum_pi, 1e-9 * (1.0 + std::fabs(sum_pi)));
  }
}

TEST(RewardMode, ParseRoundTrip) {
  for (auto m : {RewardMode::kPrivate, RewardMode::kIntegrated,
                 RewardMode::kCooperative})
    EXPECT_EQ(parse_reward_mode(to_string(m)), m);
  EXPECT_THROW(parse_reward_mode("selfish"), RegistryError);
}

TEST(GapPercent, Examples) {
  EXPECT_DOUBLE_EQ(gap_percent(110, 100), 10.0);
  EXPECT_DOUBLE_EQ(gap_percent(-90, -100), 10.0);
  for (double r : {-5.0, 0.25, 1e6}) EXPECT_EQ(gap_percent(r, r), 0.0);
  EXPECT_THROW(gap_percent(1.0, 0.0), DomainError);
}

TEST(DijContribution, Examples) {
  EXPECT_DOUBLE_EQ(dij_contribution(100, 40), 0.60);
  EXPECT_DOUBLE_EQ(dij_contribution(100, 100), 0.0);
  EXPECT_DOUBLE_EQ(dij_contribution(100, 120), -0.20);
}

TEST(CalibrateDij, Examples) {
  EXPECT_DOUBLE_EQ(calibrate_dij(std::vector<double>{1, 1},
                                 std::vector<double>{0.5, 0.7}),
                   0.6);
  EXPECT_DOUBLE_EQ(
      calibrate_dij(std::vector<double>{2}, std::vector<double>{0.86}), 0.86);
  EXPECT_DOUBLE_EQ(calibrate_dij(std::vector<double>{3, 1},
                                 std::vector<double>{1, 0}),
                   0.75);
}

TEST(CalibrateDij, StaysWithinScoreRange) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> w(0.01, 10.0), s(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    std::vector<double> ws(1 + k % 6), ss(ws.size());
    for (std::size_t i = 0; i < ws.size(); ++i) {
      ws[i] = w(gen);
      ss[i] = s(gen);
    }
    const double d = calibrate_dij(ws, ss);
    EXPECT_GE(d, *std::min_element(ss.begin(), ss.end()));
    EXPECT_LE(d, *std::max_element(ss.begin(), ss.end()));
  }
}

}  // namespace
}  // namespace coopsim
