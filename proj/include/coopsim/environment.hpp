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

#ifndef COOPSIM_ENVIRONMENT_HPP_
#define COOPSIM_ENVIRONMENT_HPP_

// Episode state machine composing the four mechanism layers.
//
// One step, in order:
//   1. validate and clip actions to [0, e_i]; convert to base units
//   2. read pre-step relational state (loyalty, baselines, membership,
//      partner matching)
//   3. base payoffs pi per tier and env overlay
//   4. trust update from this step's actions (TR-2+)
//   5. modifiers M per tier, using the updated trust
//   6. rewards from (pi, M, D, mode); record histories; advance t

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "coopsim/collective.hpp"
#include "coopsim/env_config.hpp"
#include "coopsim/errors.hpp"
#include "coopsim/payoff.hpp"
#include "coopsim/reciprocity.hpp"
#include "coopsim/rng.hpp"
#include "coopsim/trust.hpp"

namespace coopsim {

struct StepRecord {
  int t = 0;
  std::vector<double> actions;
  PayoffVector payoffs;
  std::vector<double> modifiers;
  std::vector<double> rewards;
  std::optional<SquareMatrix> trust;
  std::optional<std::vector<double>> loyalty;
  bool terminated = false;
  bool truncated = false;
};

using Observations = std::vector<std::vector<double>>;

struct ResetResult {
  Observations observations;
  std::optional<SquareMatrix> trust;
};

struct StepResult {
  Observations observations;
  std::vector<double> rewards;
  bool terminated = false;
  bool truncated = false;
  StepRecord info;
};

struct EpisodeState {
  int t = 0;
  bool terminated = false;
  bool truncated = false;
  TrustState trust;
  LoyaltyState loyalty;
  ReciprocityMemory memory;
  // Full per-agent action history in base units.
  std::vector<std::vector<double>> history;
  Rng rng{0};
  double episode_gamma = 0.0;
  std::vector<int> sanction_level;
  std::vector<bool> member;
  std::vector<int> probation;
  // partner[i] = matched agent for the current step, or -1.
  std::vector<int> partner;
};

namespace detail {

// (e_i - a_i) + f(a_i) + (gamma/n) g(a).
inline PayoffVector retained_value_payoffs(std::span<const double> a,
                                           std::span<const double> e,
                                           const ValueFunctionParams& vp,
                                           double gamma) {
  const std::size_t n = a.size();
  const double share = gamma / static_cast<double>(n) * synergy(a);
  PayoffVector pi(n);
  for (std::size_t i = 0; i < n; ++i)
    pi[i] = (e[i] - a[i]) + individual_value(a[i], vp) + share;
  return pi;
}

inline double normalize_zero(double x) { return x + 0.0; }

}  // namespace detail

class Environment {
 public:
  Environment(EnvConfig config, RewardMode mode, std::uint64_t seed = 0)
      : config_(std::move(config)), mode_(mode), seed_(seed) {
    if (config_.n_agents < 1 ||
        static_cast<int>(config_.endowments.size()) != config_.n_agents ||
        static_cast<int>(config_.interdependence.size()) != config_.n_agents)
      throw DomainError(config_.env_id + ": inconsistent agent count");
    if (!(config_.unit_scale > 0.0))
      throw DomainError("unit_scale must be > 0");
    reset(seed);
  }

  const EnvConfig& config() const { return config_; }
  RewardMode mode() const { return mode_; }
  int num_agents() const { return config_.n_agents; }
  int horizon() const { return config_.horizon; }
  double action_high(int i) const { return config_.action_high(i); }
  const EpisodeState& state() const { return state_; }
  bool done() const { return state_.terminated || state_.truncated; }

  ResetResult reset(std::optional<std::uint64_t> seed = std::nullopt) {
    if (seed) seed_ = *seed;
    const int n = num_agents();
    state_ = EpisodeState{};
    state_.rng.seed(seed_);
    state_.history.assign(n, {});
    state_.episode_gamma = config_.value_params.gamma();
    if (config_.kind == EnvKind::kSynergySearch) {
      state_.episode_gamma = state_.rng.below(2) == 0
                                 ? config_.overlay_value("gamma_low")
                                 : config_.overlay_value("gamma_high");
    }
    if (config_.trust_params)
      state_.trust = TrustState(n, config_.overlay_or("initial_trust", 0.5));
    if (config_.tr3_params)
      state_.loyalty = LoyaltyState(n, static_cast<int>(config_.overlay_or(
                                           "loyalty_horizon",
                                           config_.tr3_params->loyalty_horizon())));
    if (config_.tr4_params)
      state_.memory = ReciprocityMemory(n, config_.tr4_params->k_window());
    state_.sanction_level.assign(n, 0);
    state_.member.assign(n, true);
    state_.probation.assign(n, 0);
    state_.partner.assign(n, -1);
    ResetResult out;
    out.observations = observations();
    if (config_.has_trust()) out.trust = state_.trust.trust;
    return out;
  }

  StepResult step(std::span<const double> actions) {
    if (done()) throw ProtocolError(config_.env_id + ": episode is over");
    const int n = num_agents();
    if (static_cast<int>(actions.size()) != n)
      throw DomainError(config_.env_id + ": expected " + std::to_string(n) +
                        " actions");
    std::vector<double> clipped(n), a(n);
    for (int i = 0; i < n; ++i) {
      if (std::isnan(actions[i])) throw DomainError("NaN action");
      clipped[i] = std::clamp(actions[i], 0.0, action_high(i));
      a[i] = clipped[i] / config_.unit_scale;
    }

    if (config_.kind == EnvKind::kDynamicPartnerSelection) match_partners();
    if (config_.kind == EnvKind::kCoalitionFormation) update_exclusions();
    const std::vector<double> theta =
        config_.has_loyalty() ? state_.loyalty.thetas() : std::vector<double>();
    const std::vector<double> recip_baseline = reciprocity_baselines();

    PayoffVector pi = base_payoffs(a);
    if (config_.has_trust() || config_.kind == EnvKind::kDynamicPartnerSelection)
      state_.trust.update(trust_signals(a), *config_.trust_params);
    if (config_.kind == EnvKind::kRecoveryRace &&
        state_.trust.all_at_least(config_.overlay_value("recovery_target"))) {
      for (int i = 0; i < n; ++i)
        pi[i] += config_.overlay_value("recovery_bonus_fraction") *
                 config_.endowments[i];
    }
    std::vector<double> m(n, 0.0);
    if (config_.modifiers_enabled) m = modifiers(a, pi, theta, recip_baseline);

    record_histories(a);

    StepRecord rec;
    rec.t = state_.t;
    rec.actions = std::move(clipped);
    rec.payoffs.resize(n);
    rec.modifiers.resize(n);
    for (int i = 0; i < n; ++i) {
      rec.payoffs[i] = detail::normalize_zero(pi[i] * config_.unit_scale);
      rec.modifiers[i] = detail::normalize_zero(m[i] * config_.unit_scale);
    }
    rec.rewards = reward_vector(rec.payoffs, rec.modifiers,
                                config_.interdependence, mode_);

    ++state_.t;
    if (config_.kind == EnvKind::kTrustDilemma &&
        state_.trust.all_below(config_.overlay_value("collapse_threshold")))
      state_.terminated = true;
    if (state_.t >= config_.horizon) state_.truncated = true;

    if (config_.has_trust()) rec.trust = state_.trust.trust;
    if (config_.has_loyalty()) rec.loyalty = state_.loyalty.thetas();
    rec.terminated = state_.terminated;
    rec.truncated = state_.truncated;

    StepResult out;
    out.observations = observations();
    out.rewards = rec.rewards;
    out.terminated = rec.terminated;
    out.truncated = rec.truncated;
    out.info = std::move(rec);
    return out;
  }

  std::size_t observation_size() const {
    const std::size_t n = static_cast<std::size_t>(num_agents());
    const auto& o = config_.observation;
    std::size_t len = n;  // own + partners' previous actions
    if (config_.has_trust() && o.include_trust) len += n - 1;
    if (config_.has_loyalty() && o.include_loyalty) len += 1;
    if (config_.has_public_image()) len += n;
    if (o.interdependence_visible) len += n;
    if (o.include_step_fraction) len += 1;
    return len;
  }

  Observations observations() const {
    Observations obs(num_agents());
    for (int i = 0; i < num_agents(); ++i) obs[i] = observation(i, {});
    return obs;
  }

  // Observation of agent i. `current` optionally overrides partners'
  // previous-action slots with actions already chosen this step (used by the
  // sequential view); entries are in reported units.
  std::vector<double> observation(
      int i, std::span<const std::optional<double>> current) const {
    const int n = num_agents();
    const auto& o = config_.observation;
    std::vector<double> v;
    v.reserve(observation_size());
    auto prev_norm = [&](int j) {
      if (!current.empty() && current[j])
        return std::clamp(*current[j] / action_high(j), 0.0, 1.0);
      const auto& h = state_.history[j];
      return h.empty() ? 0.5 : h.back() / config_.endowments[j];
    };
    v.push_back(prev_norm(i));
    for (int j = 0; j < n; ++j)
      if (j != i) v.push_back(prev_norm(j));
    if (config_.has_trust() && o.include_trust)
      for (int j = 0; j < n; ++j)
        if (j != i) v.push_back(state_.trust.trust(i, j));
    if (config_.has_loyalty() && o.include_loyalty)
      v.push_back(state_.loyalty.theta(i));
    if (config_.has_public_image())
      for (int j = 0; j < n; ++j) v.push_back(state_.trust.public_reputation(j));
    if (o.interdependence_visible)
      for (double d : config_.interdependence.row(i)) v.push_back(d);
    if (o.include_step_fraction)
      v.push_back(static_cast<double>(state_.t) / config_.horizon);
    return v;
  }

  // Team-dependency weighted loyalty; TR-3 only.
  double cohesion() const {
    std::vector<double> w(num_agents());
    for (int i = 0; i < num_agents(); ++i)
      w[i] = config_.interdependence.row_mean(i);
    return coopsim::cohesion(w, state_.loyalty.thetas());
  }

 private:
  double trust_baseline(int j) const {
    const auto& h = state_.history[j];
    if (h.empty()) return 0.5 * config_.endowments[j];
    const int w = static_cast<int>(config_.overlay_or("trust_baseline_window", 10));
    return windowed_baseline(h, w);
  }

  SquareMatrix trust_signals(std::span<const double> a) const {
    const int n = num_agents();
    SquareMatrix s(n, 0.0);
    const double kappa = config_.trust_params->kappa();
    for (int j = 0; j < n; ++j) {
      const double sig = cooperation_signal(a[j], trust_baseline(j), kappa);
      for (int i = 0; i < n; ++i)
        if (i != j) s(i, j) = sig;
    }
    return s;
  }

  std::vector<double> reciprocity_baselines() const {
    if (!config_.has_reciprocity()) return {};
    const int n = num_agents();
    std::vector<double> b(n);
    for (int j = 0; j < n; ++j) {
      if (config_.kind == EnvKind::kIndirectReciprocity) {
        b[j] = state_.trust.public_reputation(j) * config_.endowments[j];
      } else {
        b[j] = state_.memory.baseline(j, 0.5 * config_.endowments[j]);
      }
    }
    return b;
  }

  // Pairs agents by weighted sampling, weight (1 - w) + w * reputation.
  void match_partners() {
    const int n = num_agents();
    const double w = config_.overlay_value("reputation_weight");
    std::vector<int> pool(n);
    for (int i = 0; i < n; ++i) pool[i] = i;
    std::fill(state_.partner.begin(), state_.partner.end(), -1);
    while (pool.size() >= 2) {
      const int first = pool.front();
      pool.erase(pool.begin());
      double total = 0.0;
      std::vector<double> weight(pool.size());
      for (std::size_t k = 0; k < pool.size(); ++k) {
        weight[k] = (1.0 - w) + w * state_.trust.public_reputation(pool[k]);
        total += weight[k];
      }
      double u = state_.rng.uniform() * total;
      std::size_t pick = pool.size() - 1;
      for (std::size_t k = 0; k < pool.size(); ++k) {
        if (u < weight[k]) {
          pick = k;
          break;
        }
        u -= weight[k];
      }
      const int second = pool[pick];
      pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
      state_.partner[first] = second;
      state_.partner[second] = first;
    }
  }

  void update_exclusions() {
    const double threshold = config_.overlay_value("exclusion_threshold");
    for (int i = 0; i < num_agents(); ++i) {
      if (state_.member[i] && state_.loyalty.history_length(i) > 0 &&
          state_.loyalty.theta(i) < threshold) {
        state_.member[i] = false;
        state_.probation[i] = 0;
      }
    }
  }

  PayoffVector base_payoffs(std::span<const double> a) {
    const int n = num_agents();
    const auto& e = config_.endowments;
    const auto& vp = config_.value_params;
    const double gamma = state_.episode_gamma;
    PayoffVector pi(n, 0.0);

    switch (config_.kind) {
      case EnvKind::kDynamicPartnerSelection:
        for (int i = 0; i < n; ++i) {
          const int p = state_.partner[i];
          if (p < 0) {
            pi[i] = e[i];
            continue;
          }
          const double pair[2] = {a[i], a[p]};
          pi[i] = (e[i] - a[i]) + individual_value(a[i], vp) +
                  gamma / 2.0 * synergy(pair);
        }
        return pi;

      case EnvKind::kTeamProduction:
      case EnvKind::kLoyaltyTeam:
      case EnvKind::kApacheProject:
      case EnvKind::kCoalitionFormation: {
        const auto& p = *config_.tr3_params;
        double total = 0.0;
        int members = 0;
        for (int i = 0; i < n; ++i) {
          if (!state_.member[i]) continue;
          total += a[i];
          ++members;
        }
        if (members == 0) return pi;
        const double q = p.omega() * std::pow(total, p.beta_scale());
        double bonus = 0.0;
        if (config_.kind == EnvKind::kTeamProduction) {
          double cap = 0.0;
          for (int i = 0; i < n; ++i) cap += e[i];
          if (total / cap >= config_.overlay_value("coordination_threshold"))
            bonus = config_.overlay_value("coordination_bonus") * q / n;
        }
        for (int i = 0; i < n; ++i)
          if (state_.member[i]) pi[i] = q / members - p.cost_c() * a[i] + bonus;
        return pi;
      }

      case EnvKind::kPublicGoods: {
        double total = 0.0;
        for (double x : a) total += x;
        const double pot = config_.overlay_value("multiplier") * total / n;
        for (int i = 0; i < n; ++i) {
          pi[i] = (e[i] - a[i]) + pot;
          if (a[i] / e[i] < config_.overlay_value("sanction_fraction"))
            pi[i] *= config_.overlay_value("sanction_multiplier");
        }
        return pi;
      }

      default:
        break;
    }

    pi = detail::retained_value_payoffs(a, e, vp, gamma);
    switch (config_.kind) {
      case EnvKind::kCooperativeNegotiation:
        for (int i = 0; i < n; ++i) {
          const auto& h = state_.history[i];
          if (!h.empty() &&
              h.back() - a[i] >
                  config_.overlay_value("breach_drop_fraction") * e[i])
            pi[i] -= config_.overlay_value("breach_cost_fraction") * e[i];
        }
        break;
      case EnvKind::kGiftExchange:
        pi[1] += config_.overlay_value("gift_rate") * a[0];
        break;
      case EnvKind::kGraduatedSanction: {
        const int cap = static_cast<int>(config_.overlay_value("sanction_cap"));
        for (int i = 0; i < n; ++i) {
          int& level = state_.sanction_level[i];
          if (a[i] / e[i] < config_.overlay_value("sanction_fraction"))
            level = std::min(cap, level + 1);
          else
            level = std::max(0, level - 1);
          pi[i] *= 1.0 - config_.overlay_value("sanction_step") * level;
        }
        break;
      }
      case EnvKind::kAppleAppStore: {
        const double share = gamma / n * synergy(a);
        const double rates[2] = {
            config_.overlay_value("commission_standard"),
            config_.overlay_value("commission_small_business")};
        for (int dev = 1; dev <= 2; ++dev) {
          const double fee =
              rates[dev - 1] * (individual_value(a[dev], vp) + share);
          pi[dev] -= fee;
          pi[0] += fee;
        }
        break;
      }
      default:
        break;
    }
    return pi;
  }

  std::vector<double> modifiers(std::span<const double> a,
                                std::span<const double> pi,
                                std::span<const double> theta,
                                std::span<const double> recip_baseline) const {
    const int n = num_agents();
    std::vector<double> m(n, 0.0);
    switch (config_.tier) {
      case Tier::kTR1:
        break;
      case Tier::kTR2:
        for (int i = 0; i < n; ++i) m[i] = trust_modifier(i, a);
        break;
      case Tier::kTR3: {
        if (config_.overlay_or("loyalty_channel", 1.0) == 0.0) break;
        const auto& p = *config_.tr3_params;
        for (int i = 0; i < n; ++i) {
          if (!state_.member[i]) continue;
          m[i] = loyalty_modifier(theta[i], teammate_average(pi, i), a[i], p);
        }
        break;
      }
      case Tier::kTR4: {
        const auto& p = *config_.tr4_params;
        std::vector<double> signals(n);
        for (int j = 0; j < n; ++j)
          signals[j] = reciprocity_signal(a[j], recip_baseline[j]);
        for (int i = 0; i < n; ++i) {
          const double u_recip = trust_gated_modifier(
              i, state_.trust.trust.row(i), config_.interdependence.row(i),
              signals, p);
          m[i] = trust_modifier(i, a) + u_recip;
        }
        break;
      }
    }
    return m;
  }

  // (mean incoming trust - 0.5) * (gamma/n) * g(a).
  double trust_modifier(int i, std::span<const double> a) const {
    const int n = num_agents();
    return (state_.trust.incoming_trust(i) - 0.5) *
           (state_.episode_gamma / n) * synergy(a);
  }

  void record_histories(std::span<const double> a) {
    const int n = num_agents();
    for (int i = 0; i < n; ++i) state_.history[i].push_back(a[i]);
    if (config_.has_loyalty()) {
      const double a_max = config_.tr3_params->a_max();
      state_.loyalty.record_all(a, a_max);
      if (config_.kind == EnvKind::kCoalitionFormation)
        update_probation(a, a_max);
    }
    if (config_.has_reciprocity()) state_.memory.record(a);
  }

  void update_probation(std::span<const double> a, double a_max) {
    const int steps = static_cast<int>(config_.overlay_value("probation_steps"));
    const double floor = config_.overlay_value("probation_fraction") * a_max;
    for (int i = 0; i < num_agents(); ++i) {
      if (state_.member[i]) continue;
      state_.probation[i] = a[i] >= floor ? state_.probation[i] + 1 : 0;
      if (state_.probation[i] >= steps) {
        state_.member[i] = true;
        state_.probation[i] = 0;
        const auto& h = state_.history[i];
        std::vector<double> fractions;
        for (std::size_t k = h.size() - steps; k < h.size(); ++k)
          fractions.push_back(std::clamp(h[k] / a_max, 0.0, 1.0));
        state_.loyalty.reset_agent(i, fractions);
      }
    }
  }

  EnvConfig config_;
  RewardMode mode_;
  std::uint64_t seed_;
  EpisodeState state_;
};

inline Environment make(std::string_view env_id,
                        RewardMode mode = RewardMode::kIntegrated,
                        ObservationConfig obs = {}, std::uint64_t seed = 0) {
  EnvConfig cfg = lookup_env(env_id);
  cfg.observation = obs;
  return Environment(std::move(cfg), mode, seed);
}

}  // namespace coopsim

#endif  // COOPSIM_ENVIRONMENT_HPP_
