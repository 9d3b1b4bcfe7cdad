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

#ifndef COOPSIM_ROLLOUT_HPP_
#define COOPSIM_ROLLOUT_HPP_

// Episode drivers: policy rollouts, scripted action schedules, and the
// 101-level constant sweep.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "coopsim/env_config.hpp"
#include "coopsim/environment.hpp"
#include "coopsim/oracles.hpp"
#include "coopsim/policies.hpp"
#include "coopsim/rng.hpp"

namespace coopsim {

struct EpisodeTrace {
  std::string env_id;
  RewardMode mode = RewardMode::kIntegrated;
  std::uint64_t seed = 0;
  std::vector<StepRecord> steps;

  // Per-agent episodic sum of rewards.
  std::vector<double> returns() const {
    std::vector<double> r;
    for (const auto& s : steps) {
      if (r.empty()) r.assign(s.rewards.size(), 0.0);
      for (std::size_t i = 0; i < s.rewards.size(); ++i) r[i] += s.rewards[i];
    }
    return r;
  }

  double total_return() const {
    double sum = 0.0;
    for (double x : returns()) sum += x;
    return sum;
  }
};

// Joint action schedule: t -> action per agent (reported units).
using ActionSchedule = std::function<std::vector<double>(int t)>;

inline EpisodeTrace run_schedule(Environment& env, const ActionSchedule& sched,
                                 std::uint64_t seed) {
  EpisodeTrace trace;
  trace.env_id = env.config().env_id;
  trace.mode = env.mode();
  trace.seed = seed;
  env.reset(seed);
  while (!env.done()) {
    const std::vector<double> a = sched(env.state().t);
    trace.steps.push_back(env.step(a).info);
  }
  return trace;
}

inline EpisodeTrace run_schedule(const EnvConfig& cfg, RewardMode mode,
                                 const ActionSchedule& sched,
                                 std::uint64_t seed) {
  Environment env(cfg, mode, seed);
  return run_schedule(env, sched, seed);
}

// One policy per agent. Random streams derive from the episode seed unless
// the spec pins its own; oracle specs are solved once against `cfg`.
inline std::vector<Policy> make_policies(const std::vector<PolicySpec>& specs,
                                         const EnvConfig& cfg,
                                         std::uint64_t seed) {
  if (static_cast<int>(specs.size()) != cfg.n_agents)
    throw DomainError(cfg.env_id + ": expected " +
                      std::to_string(cfg.n_agents) + " policies, got " +
                      std::to_string(specs.size()));
  std::vector<Policy> out;
  out.reserve(specs.size());
  for (std::size_t i = 0; i < specs.size(); ++i) {
    std::optional<OracleSolution> sol;
    if (specs[i].kind == PolicyKind::kOracle)
      sol = solve_oracle(specs[i].oracle, cfg);
    out.emplace_back(specs[i], derive_seed(seed, i + 1), std::move(sol));
  }
  return out;
}

inline EpisodeTrace run_episode(Environment& env, std::vector<Policy>& policies,
                                std::uint64_t seed) {
  const int n = env.num_agents();
  if (static_cast<int>(policies.size()) != n)
    throw DomainError("policy count does not match agent count");
  EpisodeTrace trace;
  trace.env_id = env.config().env_id;
  trace.mode = env.mode();
  trace.seed = seed;
  ResetResult rr = env.reset(seed);
  Observations obs = std::move(rr.observations);
  std::vector<double> prev;
  while (!env.done()) {
    std::vector<double> a(n);
    for (int i = 0; i < n; ++i) {
      AgentContext ctx;
      ctx.agent = i;
      ctx.t = env.state().t;
      ctx.endowment = env.action_high(i);
      ctx.partner_previous.emplace();
      ctx.partner_endowments.emplace();
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        if (!prev.empty()) ctx.partner_previous->push_back(prev[j]);
        ctx.partner_endowments->push_back(env.action_high(j));
      }
      a[i] = policies[i].act(obs[i], ctx);
    }
    StepResult sr = env.step(a);
    prev = sr.info.actions;
    obs = std::move(sr.observations);
    trace.steps.push_back(std::move(sr.info));
  }
  return trace;
}

inline EpisodeTrace run_episode(const EnvConfig& cfg, RewardMode mode,
                                const std::vector<PolicySpec>& specs,
                                std::uint64_t seed) {
  Environment env(cfg, mode, seed);
  std::vector<Policy> policies = make_policies(specs, cfg, seed);
  return run_episode(env, policies, seed);
}

// Every agent plays the same stationary fraction of its endowment.
inline ActionSchedule uniform_fraction(const EnvConfig& cfg, double frac) {
  std::vector<double> a(cfg.n_agents);
  for (int i = 0; i < cfg.n_agents; ++i) a[i] = frac * cfg.action_high(i);
  return [a](int) { return a; };
}

// Mean total return of `policy` (every agent) against the reference oracle
// replayed open-loop, over the same seeds.
struct GapRow {
  std::string env_id;
  std::string policy;
  RewardMode mode = RewardMode::kIntegrated;
  OracleName oracle = OracleName::kEquilibrium;
  double r_algo = 0.0;
  double r_oracle = 0.0;
  double gap_pct = 0.0;
};

inline GapRow evaluate_gap(const EnvConfig& cfg, const PolicySpec& policy,
                           RewardMode mode,
                           const std::vector<std::uint64_t>& seeds) {
  if (seeds.empty()) throw DomainError("evaluate_gap needs at least one seed");
  GapRow row;
  row.env_id = cfg.env_id;
  row.policy = policy.name();
  row.mode = mode;
  row.oracle = reference_oracle(cfg);
  const std::vector<PolicySpec> algo(cfg.n_agents, policy);
  const std::vector<PolicySpec> ref(cfg.n_agents,
                                    PolicySpec::from_oracle(row.oracle));
  for (std::uint64_t s : seeds) {
    row.r_algo += run_episode(cfg, mode, algo, s).total_return();
    row.r_oracle += run_episode(cfg, mode, ref, s).total_return();
  }
  row.r_algo /= static_cast<double>(seeds.size());
  row.r_oracle /= static_cast<double>(seeds.size());
  row.gap_pct = gap_percent(row.r_algo, row.r_oracle);
  return row;
}

struct SweepRow {
  int pct = 0;
  std::vector<double> mean_returns;  // per agent, averaged over seeds
  double mean_total = 0.0;
};

struct SweepTable {
  std::string env_id;
  RewardMode mode = RewardMode::kIntegrated;
  std::vector<SweepRow> rows;  // pct 0..100
  int argmax_pct = 0;          // first maximiser of mean_total
};

inline SweepTable constant_sweep(const EnvConfig& cfg, RewardMode mode,
                                 const std::vector<std::uint64_t>& seeds) {
  if (seeds.empty()) throw DomainError("constant_sweep needs at least one seed");
  SweepTable table;
  table.env_id = cfg.env_id;
  table.mode = mode;
  Environment env(cfg, mode, seeds.front());
  for (int pct = 0; pct <= 100; ++pct) {
    SweepRow row;
    row.pct = pct;
    row.mean_returns.assign(cfg.n_agents, 0.0);
    const ActionSchedule sched = uniform_fraction(cfg, pct / 100.0);
    for (std::uint64_t s : seeds) {
      const std::vector<double> r = run_schedule(env, sched, s).returns();
      for (int i = 0; i < cfg.n_agents; ++i) row.mean_returns[i] += r[i];
    }
    for (double& x : row.mean_returns) {
      x /= static_cast<double>(seeds.size());
      row.mean_total += x;
    }
    table.rows.push_back(std::move(row));
  }
  for (const auto& row : table.rows)
    if (row.mean_total > table.rows[table.argmax_pct].mean_total)
      table.argmax_pct = row.pct;
  return table;
}

inline SweepTable constant_sweep(std::string_view env_id, RewardMode mode,
                                 const std::vector<std::uint64_t>& seeds) {
  return constant_sweep(lookup_env(env_id), mode, seeds);
}

}  // namespace coopsim

#endif  // COOPSIM_ROLLOUT_HPP_
