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

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "coopsim/audit.hpp"
#include "coopsim/trace_io.hpp"

namespace coopsim {
namespace {

TEST(StaticAuditSpec, Shape) {
  const StaticAuditSpec s;
  ASSERT_EQ(s.levels_pct.size(), 21u);
  EXPECT_EQ(s.levels_pct.front(), 0);
  EXPECT_EQ(s.levels_pct[1], 5);
  EXPECT_EQ(s.levels_pct.back(), 100);
  EXPECT_EQ(s.deviation_points_pct, (std::vector<int>{20, 40, 60, 80}));
  EXPECT_EQ(s.deviation_factor, 0.5);
}

TEST(StaticAudit, RowsAndDeviations) {
  const auto rep = static_audit("TrustDilemma-v0", RewardMode::kIntegrated, 0);
  EXPECT_EQ(rep.returns.size(), 21u);
  for (const auto& row : rep.returns) EXPECT_EQ(row.size(), 2u);
  ASSERT_EQ(rep.deviations.size(), 4u);
  EXPECT_EQ(rep.deviations[1].level_pct, 40);
  EXPECT_EQ(rep.deviations[1].deviator_action, 20.0);
}

TEST(StaticAudit, IgnoresPolicyArgument) {
  Policy a(PolicySpec::constant(10));
  Policy b(PolicySpec::random(5));
  for (const char* id : {"TrustDilemma-v0", "PublicGoods-v0", "AppleAppStore-v0"}) {
    const std::string x =
        to_json(static_audit(id, RewardMode::kIntegrated, 2, a)).dump();
    const std::string y =
        to_json(static_audit(id, RewardMode::kIntegrated, 2, b)).dump();
    const std::string z =
        to_json(static_audit(id, RewardMode::kIntegrated, 2)).dump();
    EXPECT_EQ(x, y) << id;
    EXPECT_EQ(x, z) << id;
  }
}

TEST(StaticAudit, SeedDeterministic) {
  const auto a = to_json(static_audit("SynergySearch-v0", RewardMode::kPrivate, 4));
  const auto b = to_json(static_audit("SynergySearch-v0", RewardMode::kPrivate, 4));
  EXPECT_EQ(a.dump(), b.dump());
}

TEST(TemporalStrategies, Composition) {
  const auto s = temporal_strategies(100);
  ASSERT_EQ(s.size(), 15u);
  int full = 0, sw = 0, early = 0, ramp = 0, fin = 0;
  for (const auto& x : s) {
    full += x.kind == TemporalKind::kFullDefect;
    sw += x.kind == TemporalKind::kSwitchpoint;
    early += x.kind == TemporalKind::kEarlyDefect;
    ramp += x.kind == TemporalKind::kGradualRamp;
    fin += x.kind == TemporalKind::kFinalStep;
  }
  EXPECT_EQ(full, 1);
  EXPECT_EQ(sw, 9);
  EXPECT_EQ(early, 3);
  EXPECT_EQ(ramp, 1);
  EXPECT_EQ(fin, 1);
}

TEST(TemporalStrategies, SwitchpointPlacement) {
  std::vector<int> steps;
  for (const auto& x : temporal_strategies(100))
    if (x.kind == TemporalKind::kSwitchpoint) {
      EXPECT_GE(x.fraction, 0.50 - 1e-12);
      EXPECT_LE(x.fraction, 0.99 + 1e-12);
      steps.push_back(x.step);
    }
  EXPECT_EQ(steps, (std::vector<int>{50, 56, 62, 68, 75, 81, 87, 93, 99}));
}

TEST(TemporalAction, Shapes) {
  const int H = 100;
  const double c = 50.0;
  const auto s = temporal_strategies(H);
  const auto& ramp = s[13];
  ASSERT_EQ(ramp.kind, TemporalKind::kGradualRamp);
  EXPECT_EQ(temporal_action(ramp, 79, H, c), c);
  EXPECT_DOUBLE_EQ(temporal_action(ramp, 80, H, c), c * (1.0 - 1.0 / 20));
  EXPECT_EQ(temporal_action(ramp, 99, H, c), 0.0);
  const auto& fin = s[14];
  EXPECT_EQ(temporal_action(fin, 98, H, c), c);
  EXPECT_EQ(temporal_action(fin, 99, H, c), 0.0);
  const auto& early = s[10];
  ASSERT_EQ(early.kind, TemporalKind::kEarlyDefect);
  EXPECT_EQ(temporal_action(early, 9, H, c), 0.0);
  EXPECT_EQ(temporal_action(early, 10, H, c), c);
  const auto& sw = s[1];
  EXPECT_EQ(temporal_action(sw, 49, H, c), c);
  EXPECT_EQ(temporal_action(sw, 50, H, c), 0.0);
}

TEST(TemporalAudit, ReportShape) {
  const auto rep = temporal_audit("ReputationMarket-v0", 0);
  EXPECT_EQ(rep.results.size(), 15u);
  EXPECT_EQ(rep.count(TemporalKind::kSwitchpoint), 9);
  EXPECT_EQ(rep.mode, RewardMode::kIntegrated);
}

TEST(TemporalAudit, NoSwitchpointExploitationAtSeedZero) {
  for (const auto& id : registered_env_ids())
    EXPECT_EQ(temporal_audit(id, 0).exploitative_count(TemporalKind::kSwitchpoint),
              0)
        << id;
}

TEST(Classify, BaselineAgainstItself) {
  const std::vector<double> r{120.5, 99.0, 101.25};
  const auto o = compare_returns(r, r);
  EXPECT_EQ(o.deviator_delta, 0.0);
  EXPECT_EQ(o.partner_mean_delta, 0.0);
  EXPECT_FALSE(o.exploitative);
}

TEST(Classify, ThresholdIsStrict) {
  EXPECT_TRUE(classify(1e-6, -1e-6).exploitative);
  EXPECT_FALSE(classify(kExploitEpsilon, -1.0).exploitative);
  EXPECT_FALSE(classify(1.0, -kExploitEpsilon).exploitative);
  EXPECT_FALSE(classify(1.0, 1.0).exploitative);
}

TEST(Classify, SignFlipNeverKeepsExploitation) {
  std::mt19937_64 g(41);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    const double d = u(g), p = u(g);
    EXPECT_FALSE(classify(d, p).exploitative && classify(-d, -p).exploitative);
    if (classify(d, p).exploitative) EXPECT_FALSE(classify(-d, -p).exploitative);
  }
}

TEST(FFin, Examples) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  EXPECT_EQ(f_fin(std::vector<double>{1, 2, 3, 4}), 1.0);
  EXPECT_EQ(f_fin(std::vector<double>{1, 2, nan, 4}), 0.75);
  EXPECT_EQ(f_fin(std::vector<double>{nan, nan}), 0.0);
  EXPECT_EQ(f_fin(std::vector<double>{INFINITY, -INFINITY, 1}), 1.0 / 3.0);
  EXPECT_THROW(f_fin(std::vector<double>{}), DomainError);
}

}  // namespace
}  // namespace coopsim
