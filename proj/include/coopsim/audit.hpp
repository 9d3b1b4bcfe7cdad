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

#ifndef COOPSIM_AUDIT_HPP_
#define COOPSIM_AUDIT_HPP_

// Behavioral audits over fixed-action profiles, plus the f_fin metric.

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "coopsim/env_config.hpp"
#include "coopsim/errors.hpp"
#include "coopsim/rollout.hpp"

namespace coopsim {

inline constexpr double kExploitEpsilon = 1e-9;

struct StaticAuditSpec {
  std::vector<int> levels_pct;           // 0, 5, ..., 100
  std::vector<int> deviation_points_pct = {20, 40, 60, 80};
  double deviation_factor = 0.5;

  StaticAuditSpec() {
    for (int p = 0; p <= 100; p += 5) levels_pct.push_back(p);
  }
};

struct AuditOutcome {
  double deviator_delta = 0.0;
  double partner_mean_delta = 0.0;
  bool exploitative = false;
};

inline AuditOutcome classify(double deviator_delta, double partner_mean_delta,
                             double eps = kExploitEpsilon) {
  return {deviator_delta, partner_mean_delta,
          deviator_delta > eps && partner_mean_delta < -eps};
}

// Agent 0 deviates; partners are everyone else.
inline AuditOutcome compare_returns(std::span<const double> baseline,
                                    std::span<const double> deviation) {
  const double dev = deviation[0] - baseline[0];
  double partners = 0.0;
  for (std::size_t j = 1; j < baseline.size(); ++j)
    partners += deviation[j] - baseline[j];
  if (baseline.size() > 1) partners /= static_cast<double>(baseline.size() - 1);
  return classify(dev, partners);
}

struct StaticDeviation {
  int level_pct = 0;
  double deviator_action = 0.0;
  AuditOutcome outcome;
};

struct StaticAuditReport {
  std::string env_id;
  RewardMode mode = RewardMode::kIntegrated;
  std::uint64_t seed = 0;
  std::vector<int> levels_pct;
  std::vector<std::vector<double>> returns;  // one row per level
  std::vector<StaticDeviation> deviations;

  int exploitative_count() const {
    int k = 0;
    for (const auto& d : deviations) k += d.outcome.exploitative;
    return k;
  }
};

namespace audit_detail {

inline std::vector<double> deviate_agent0(const EnvConfig& cfg, double frac,
                                          double a0) {
  std::vector<double> a(cfg.n_agents);
  for (int i = 0; i < cfg.n_agents; ++i) a[i] = frac * cfg.action_high(i);
  a[0] = a0;
  return a;
}

}  // namespace audit_detail

// The trailing argument accepts any policy object and never reads it: the
// audit's actions are fixed.
template <typename AnyPolicy = std::nullptr_t>
StaticAuditReport static_audit(const EnvConfig& cfg, RewardMode mode,
                               std::uint64_t seed,
                               const AnyPolicy& /*ignored*/ = nullptr,
                               const StaticAuditSpec& spec = {}) {
  StaticAuditReport rep;
  rep.env_id = cfg.env_id;
  rep.mode = mode;
  rep.seed = seed;
  rep.levels_pct = spec.levels_pct;
  Environment env(cfg, mode, seed);
  for (int pct : spec.levels_pct)
    rep.returns.push_back(
        run_schedule(env, uniform_fraction(cfg, pct / 100.0), seed).returns());
  for (int pct : spec.deviation_points_pct) {
    const double frac = pct / 100.0;
    const double a0 = frac * spec.deviation_factor * cfg.action_high(0);
    const std::vector<double> joint =
        audit_detail::deviate_agent0(cfg, frac, a0);
    const std::vector<double> base =
        run_schedule(env, uniform_fraction(cfg, frac), seed).returns();
    const std::vector<double> dev =
        run_schedule(env, [&](int) { return joint; }, seed).returns();
    rep.deviations.push_back({pct, a0, compare_returns(base, dev)});
  }
  return rep;
}

template <typename AnyPolicy = std::nullptr_t>
StaticAuditReport static_audit(std::string_view env_id, RewardMode mode,
                               std::uint64_t seed,
                               const AnyPolicy& p = nullptr) {
  return static_audit(lookup_env(env_id), mode, seed, p);
}

enum class TemporalKind { kFullDefect, kSwitchpoint, kEarlyDefect, kGradualRamp, kFinalStep };

inline std::string_view to_string(TemporalKind k) {
  switch (k) {
    case TemporalKind::kFullDefect: return "full_defect";
    case TemporalKind::kSwitchpoint: return "switchpoint";
    case TemporalKind::kEarlyDefect: return "early_defect";
    case TemporalKind::kGradualRamp: return "gradual_ramp";
    case TemporalKind::kFinalStep: return "final_step";
  }
  return "?";
}

struct TemporalStrategy {
  TemporalKind kind = TemporalKind::kFullDefect;
  double fraction = 0.0;  // switchpoint / early-defect fraction
  int step = 0;           // resolved step index (switch, early end, ramp start)
};

inline int fraction_to_step(double frac, int horizon) {
  return static_cast<int>(std::lround(frac * horizon));
}

inline std::vector<TemporalStrategy> temporal_strategies(int horizon) {
  std::vector<TemporalStrategy> s;
  s.push_back({TemporalKind::kFullDefect, 0.0, 0});
  for (int k = 0; k <= 8; ++k) {
    const double f = 0.50 + k * (0.49 / 8.0);
    s.push_back({TemporalKind::kSwitchpoint, f, fraction_to_step(f, horizon)});
  }
  for (double f : {0.10, 0.20, 0.30})
    s.push_back({TemporalKind::kEarlyDefect, f, fraction_to_step(f, horizon)});
  s.push_back({TemporalKind::kGradualRamp, 0.20,
               horizon - fraction_to_step(0.20, horizon)});
  s.push_back({TemporalKind::kFinalStep, 0.0, horizon - 1});
  return s;
}

// Agent 0's action at step t under strategy s, with cooperative level c.
inline double temporal_action(const TemporalStrategy& s, int t, int horizon,
                              double c) {
  switch (s.kind) {
    case TemporalKind::kFullDefect:
      return 0.0;
    case TemporalKind::kSwitchpoint:
      return t < s.step ? c : 0.0;
    case TemporalKind::kEarlyDefect:
      return t < s.step ? 0.0 : c;
    case TemporalKind::kGradualRamp: {
      if (t < s.step) return c;
      const int len = horizon - s.step;
      return c * (1.0 - static_cast<double>(t - s.step + 1) / len);
    }
    case TemporalKind::kFinalStep:
      return t == horizon - 1 ? 0.0 : c;
  }
  return c;
}

struct TemporalResult {
  TemporalStrategy strategy;
  AuditOutcome outcome;
};

struct TemporalAuditReport {
  std::string env_id;
  RewardMode mode = RewardMode::kIntegrated;
  std::uint64_t seed = 0;
  std::vector<double> baseline_returns;
  std::vector<TemporalResult> results;

  int exploitative_count(TemporalKind k) const {
    int n = 0;
    for (const auto& r : results)
      n += r.strategy.kind == k && r.outcome.exploitative;
    return n;
  }
  int count(TemporalKind k) const {
    int n = 0;
    for (const auto& r : results) n += r.strategy.kind == k;
    return n;
  }
};

// Baseline: everyone at 0.5 e_i throughout. Run under integrated rewards.
inline TemporalAuditReport temporal_audit(
    const EnvConfig& cfg, std::uint64_t seed,
    RewardMode mode = RewardMode::kIntegrated) {
  TemporalAuditReport rep;
  rep.env_id = cfg.env_id;
  rep.mode = mode;
  rep.seed = seed;
  Environment env(cfg, mode, seed);
  rep.baseline_returns =
      run_schedule(env, uniform_fraction(cfg, 0.5), seed).returns();
  const int H = cfg.horizon;
  const double c0 = 0.5 * cfg.action_high(0);
  for (const TemporalStrategy& s : temporal_strategies(H)) {
    auto sched = [&](int t) {
      return audit_detail::deviate_agent0(cfg, 0.5,
                                           temporal_action(s, t, H, c0));
    };
    const std::vector<double> dev = run_schedule(env, sched, seed).returns();
    rep.results.push_back({s, compare_returns(rep.baseline_returns, dev)});
  }
  return rep;
}

inline TemporalAuditReport temporal_audit(std::string_view env_id,
                                          std::uint64_t seed) {
  return temporal_audit(lookup_env(env_id), seed);
}

// Fraction of finite entries; NaN and +-inf count as non-finite.
inline double f_fin(std::span<const double> series) {
  if (series.empty()) throw DomainError("f_fin of an empty series");
  std::size_t finite = 0;
  for (double x : series) finite += std::isfinite(x);
  return static_cast<double>(finite) / static_cast<double>(series.size());
}

}  // namespace coopsim

#endif  // COOPSIM_AUDIT_HPP_
