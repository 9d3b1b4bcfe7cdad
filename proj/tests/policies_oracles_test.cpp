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
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "coopsim/oracles.hpp"
#include "coopsim/policies.hpp"
#include "coopsim/rollout.hpp"

namespace coopsim {
namespace {

AgentContext context(int agent, int t, double e,
                     std::vector<double> partner_prev,
                     std::vector<double> partner_e) {
  AgentContext c;
  c.agent = agent;
  c.t = t;
  c.endowment = e;
  c.partner_previous = std::move(partner_prev);
  c.partner_endowments = std::move(partner_e);
  return c;
}

// Episodic return of every agent with a fixed per-agent profile.
std::vector<double> profile_returns(const EnvConfig& cfg, RewardMode mode,
                                    const std::vector<double>& profile) {
  return run_schedule(cfg, mode, [&](int) { return profile; }, 0).returns();
}

TEST(PolicySpec, ParseAndName) {
  for (const std::string s : {"Constant_00", "Constant_07", "Constant_50",
                              "Constant_100", "Random", "Random:7", "TitForTat",
                              "Oracle_Loyalty", "Oracle_TrustAware"})
    EXPECT_EQ(PolicySpec::parse(s).name(), s);
  EXPECT_EQ(PolicySpec::parse("Constant_5"), PolicySpec::constant(5));
}

TEST(PolicySpec, RejectsBadInput) {
  EXPECT_THROW(PolicySpec::parse("Constant_101"), DomainError);
  EXPECT_THROW(PolicySpec::parse("Constant_x"), RegistryError);
  EXPECT_THROW(PolicySpec::parse("Greedy"), RegistryError);
  EXPECT_THROW(PolicySpec::parse("Oracle_Nope"), RegistryError);
}

TEST(ConstantPolicy, FractionOfEndowment) {
  const std::vector<double> obs;
  Policy half(PolicySpec::parse("Constant_50"));
  for (int t = 0; t < 5; ++t)
    EXPECT_EQ(half.act(obs, context(0, t, 100, {t * 3.0}, {100})), 50.0);
  Policy zero(PolicySpec::parse("Constant_0"));
  Policy full(PolicySpec::parse("Constant_100"));
  EXPECT_EQ(zero.act(obs, context(0, 0, 100, {}, {})), 0.0);
  EXPECT_EQ(full.act(obs, context(0, 0, 80, {}, {})), 80.0);
}

TEST(RandomPolicy, SeededAndBounded) {
  const std::vector<double> obs;
  Policy a(PolicySpec::random(3)), b(PolicySpec::random(3)),
      c(PolicySpec::random(4));
  bool differs = false;
  for (int t = 0; t < 100; ++t) {
    const auto ctx = context(0, t, 100, {}, {});
    const double x = a.act(obs, ctx), y = b.act(obs, ctx), z = c.act(obs, ctx);
    EXPECT_EQ(x, y);
    EXPECT_GE(x, 0.0);
    EXPECT_LT(x, 100.0);
    differs |= x != z;
  }
  EXPECT_TRUE(differs);
}

TEST(TitForTat, MatchesPartnerFraction) {
  const std::vector<double> obs;
  Policy tft(PolicySpec::tit_for_tat());
  EXPECT_EQ(tft.act(obs, context(0, 0, 100, {}, {100})), 50.0);
  EXPECT_DOUBLE_EQ(tft.act(obs, context(0, 1, 100, {30}, {100})), 30.0);
  // Scales by the partner's endowment.
  EXPECT_DOUBLE_EQ(tft.act(obs, context(0, 1, 100, {25}, {50})), 50.0);
}

TEST(TitForTat, NeedsPartnerContext) {
  Policy tft(PolicySpec::tit_for_tat());
  AgentContext bare;
  bare.endowment = 100;
  EXPECT_THROW(tft.act(std::vector<double>{}, bare), DomainError);
}

TEST(TitForTat, FollowsConstantPartnerInEpisode) {
  const auto tr = run_episode(lookup_env("TrustDilemma-v0"),
                              RewardMode::kIntegrated,
                              {PolicySpec::tit_for_tat(), PolicySpec::constant(30)},
                              1);
  ASSERT_GE(tr.steps.size(), 3u);
  EXPECT_EQ(tr.steps[0].actions[0], 50.0);
  for (std::size_t t = 1; t < tr.steps.size(); ++t)
    EXPECT_DOUBLE_EQ(tr.steps[t].actions[0], 30.0) << "t=" << t;
}

TEST(TitForTat, SelfPlayIsAFixedPoint) {
  const auto tr = run_episode(lookup_env("ReciprocalDilemma-v0"),
                              RewardMode::kIntegrated,
                              {PolicySpec::tit_for_tat(), PolicySpec::tit_for_tat()},
                              2);
  for (const auto& s : tr.steps)
    EXPECT_EQ(s.actions, (std::vector<double>{50.0, 50.0}));
}

TEST(OraclePolicy, RequiresSolution) {
  EXPECT_THROW(Policy(PolicySpec::from_oracle(OracleName::kNash)), DomainError);
}

TEST(ReferenceOracle, TierMapping) {
  EXPECT_EQ(reference_oracle("SLCD-v0"), OracleName::kTrustAware);
  EXPECT_EQ(reference_oracle("PublicGoods-v0"), OracleName::kLoyalty);
  EXPECT_EQ(reference_oracle("GiftExchange-v0"),
            OracleName::kBoundedReciprocity);
  EXPECT_EQ(reference_oracle("PartnerHoldUp-v0"), OracleName::kEquilibrium);
}

TEST(OracleName, ParseRoundTrip) {
  for (OracleName o : kAllOracles) {
    EXPECT_EQ(parse_oracle_name(to_string(o)), o);
    EXPECT_EQ(parse_oracle_name("Oracle_" + std::string(to_string(o))), o);
  }
}

TEST(SolveOracle, TeamProductionNashMatchesSymmetricSolver) {
  const EnvConfig& cfg = lookup_env("TeamProduction-v0");
  const auto sol = solve_oracle(OracleName::kNash, cfg);
  const double a = best_response_symmetric(*cfg.tr3_params, cfg.n_agents);
  for (double x : sol.profile) EXPECT_NEAR(x, a, 1e-6);
  const long double ref = std::exp((10.0L / 3.0L) * std::log(4.375L)) / 4.0L;
  EXPECT_NEAR(sol.profile[0], static_cast<double>(ref), 1e-6);
}

TEST(SolveOracle, DegenerateSoloMaximizer) {
  EnvConfig cfg = lookup_env("PartnerHoldUp-v0");
  cfg.value_params = cfg.value_params.with_gamma(0.0);
  cfg.interdependence = cfg.interdependence.zeroed();
  const auto sol = solve_oracle(OracleName::kEquilibrium, cfg);
  // f'(a) = theta / (1 + a) = 1 at a = theta - 1.
  for (double x : sol.profile) EXPECT_NEAR(x, 19.0, 1e-6);
}

TEST(SolveOracle, StationaryAcrossRepeatedSolves) {
  for (const auto& id : registered_env_ids()) {
    const EnvConfig& cfg = lookup_env(id);
    for (OracleName o : kAllOracles) {
      const auto a = solve_oracle(o, cfg), b = solve_oracle(o, cfg);
      EXPECT_EQ(a.profile, b.profile) << id << " " << to_string(o);
    }
  }
}

TEST(SolveOracle, LoyaltyEqualsSocialOptimumOnTeams) {
  for (const auto& id : registered_env_ids()) {
    const EnvConfig& cfg = lookup_env(id);
    if (cfg.tier != Tier::kTR3) continue;
    EXPECT_EQ(solve_oracle(OracleName::kLoyalty, cfg).profile,
              solve_oracle(OracleName::kSocialOptimum, cfg).profile)
        << id;
  }
}

TEST(SolveOracle, ProfilesInsideActionBounds) {
  for (const auto& id : registered_env_ids()) {
    const EnvConfig& cfg = lookup_env(id);
    for (OracleName o : kAllOracles) {
      const auto sol = solve_oracle(o, cfg);
      ASSERT_EQ(static_cast<int>(sol.profile.size()), cfg.n_agents);
      for (int i = 0; i < cfg.n_agents; ++i) {
        EXPECT_GE(sol.profile[i], 0.0);
        EXPECT_LE(sol.profile[i], cfg.action_high(i));
      }
    }
  }
}

// Environments whose modifier-off private payoff is exactly the oracle's
// tier formula (no payoff overlays, nominal gamma, joint synergy).
const char* const kPlainPayoffEnvs[] = {
    "PartnerHoldUp-v0", "PlatformEcosystem-v0", "RenaultNissan-v0",
    "TrustDilemma-v0",  "SLCD-v0",              "ReputationMarket-v0",
    "ReciprocalDilemma-v0", "IndirectReciprocity-v0", "LoyaltyTeam-v0",
    "ApacheProject-v0"};

TEST(SolveOracle, NashProfileResistsUnilateralDeviation) {
  for (const char* id : kPlainPayoffEnvs) {
    EnvConfig cfg = lookup_env(id);
    cfg.modifiers_enabled = false;
    const auto sol = solve_oracle(OracleName::kNash, cfg);
    const auto base = profile_returns(cfg, RewardMode::kPrivate, sol.profile);
    for (int i = 0; i < cfg.n_agents; ++i) {
      for (double sign : {-1.0, 1.0}) {
        auto dev = sol.profile;
        dev[i] = std::clamp(dev[i] + sign * 0.01 * cfg.action_high(i), 0.0,
                            cfg.action_high(i));
        const auto r = profile_returns(cfg, RewardMode::kPrivate, dev);
        EXPECT_LE(r[i] - base[i], 1e-6 * std::fabs(base[i]))
            << id << " agent " << i << " sign " << sign;
      }
    }
  }
}

TEST(SolveOracle, LoyaltyDominatesNashOnTeams) {
  int strict = 0, teams = 0;
  for (const auto& id : registered_env_ids()) {
    const EnvConfig& cfg = lookup_env(id);
    if (cfg.tier != Tier::kTR3) continue;
    ++teams;
    const auto nash = solve_oracle(OracleName::kNash, cfg).profile;
    const auto loyal = solve_oracle(OracleName::kLoyalty, cfg).profile;
    double rn = 0, rl = 0;
    for (double x : profile_returns(cfg, RewardMode::kIntegrated, nash)) rn += x;
    for (double x : profile_returns(cfg, RewardMode::kIntegrated, loyal)) rl += x;
    EXPECT_GE(rl, rn) << id;
    strict += rl > rn;
  }
  EXPECT_EQ(teams, 5);
  EXPECT_GE(strict, 4);
}

TEST(Gap, OracleReplayHasZeroGap) {
  for (const auto& id : registered_env_ids()) {
    const EnvConfig& cfg = lookup_env(id);
    const auto row = evaluate_gap(
        cfg, PolicySpec::from_oracle(reference_oracle(cfg)),
        RewardMode::kIntegrated, {0, 1});
    EXPECT_NEAR(row.gap_pct, 0.0, 1e-9) << id;
  }
}

TEST(Gap, ZeroContributionTrailsLoyaltyOnTeams) {
  for (const auto& id : registered_env_ids()) {
    const EnvConfig& cfg = lookup_env(id);
    if (cfg.tier != Tier::kTR3) continue;
    const auto row = evaluate_gap(cfg, PolicySpec::constant(0),
                                  RewardMode::kIntegrated, {0});
    EXPECT_EQ(row.oracle, OracleName::kLoyalty);
    EXPECT_LT(row.gap_pct, 0.0) << id;
  }
}

TEST(ConstantSweep, HasOneHundredOneRows) {
  const auto t = constant_sweep("SLCD-v0", RewardMode::kIntegrated, {0, 1});
  ASSERT_EQ(t.rows.size(), 101u);
  for (int k = 0; k <= 100; ++k) EXPECT_EQ(t.rows[k].pct, k);
}

TEST(ConstantSweep, FlatPayoffsGiveFlatTable) {
  EnvConfig cfg = lookup_env("TeamProduction-v0");
  cfg.tr3_params = TR3Params(0.0, 0.7, 0.0, 0.0, 0.0, 50.0, 10);
  cfg.modifiers_enabled = false;
  const auto t = constant_sweep(cfg, RewardMode::kIntegrated, {0});
  for (const auto& row : t.rows) EXPECT_EQ(row.mean_total, 0.0);
  EXPECT_EQ(t.argmax_pct, 0);
}

TEST(ConstantSweep, ArgmaxIsFirstMaximizer) {
  const auto t = constant_sweep("TrustDilemma-v0", RewardMode::kIntegrated, {3});
  for (const auto& row : t.rows)
    EXPECT_LE(row.mean_total, t.rows[t.argmax_pct].mean_total);
  for (int k = 0; k < t.argmax_pct; ++k)
    EXPECT_LT(t.rows[k].mean_total, t.rows[t.argmax_pct].mean_total);
}

}  // namespace
}  // namespace coopsim
