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

#ifndef COOPSIM_ENV_CONFIG_HPP_
#define COOPSIM_ENV_CONFIG_HPP_

// Environment configuration types and the immutable registry of the twenty
// environments.

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coopsim/collective.hpp"
#include "coopsim/errors.hpp"
#include "coopsim/payoff.hpp"
#include "coopsim/reciprocity.hpp"
#include "coopsim/trust.hpp"

namespace coopsim {

enum class Tier { kTR1 = 1, kTR2 = 2, kTR3 = 3, kTR4 = 4 };

inline std::string_view to_string(Tier t) {
  switch (t) {
    case Tier::kTR1: return "TR1";
    case Tier::kTR2: return "TR2";
    case Tier::kTR3: return "TR3";
    case Tier::kTR4: return "TR4";
  }
  return "?";
}

enum class EnvKind {
  kPartnerHoldUp,
  kPlatformEcosystem,
  kDynamicPartnerSelection,
  kSynergySearch,
  kRenaultNissan,
  kTrustDilemma,
  kRecoveryRace,
  kSLCD,
  kCooperativeNegotiation,
  kReputationMarket,
  kTeamProduction,
  kLoyaltyTeam,
  kCoalitionFormation,
  kApacheProject,
  kPublicGoods,
  kReciprocalDilemma,
  kGiftExchange,
  kIndirectReciprocity,
  kGraduatedSanction,
  kAppleAppStore,
};

struct ObservationConfig {
  bool interdependence_visible = true;
  bool include_trust = true;
  bool include_loyalty = true;
  bool include_step_fraction = true;

  friend bool operator==(const ObservationConfig&,
                         const ObservationConfig&) = default;
};

struct EnvConfig {
  std::string env_id;
  EnvKind kind = EnvKind::kTrustDilemma;
  Tier tier = Tier::kTR1;
  int n_agents = 2;
  int horizon = 100;
  std::vector<double> endowments;
  InterdependenceMatrix interdependence;
  ValueFunctionParams value_params;
  std::optional<TrustParams> trust_params;
  std::optional<TR3Params> tr3_params;
  std::optional<TR4Params> tr4_params;
  // Env-specific named constants read by the step logic; kept as a map so
  // the serialized registry shows every knob.
  std::map<std::string, double> overlay;
  ObservationConfig observation;
  // Mechanism modifiers M_i; false forces M = 0.
  bool modifiers_enabled = true;
  // Unit of account: endowments and action bounds scale by this factor,
  // dynamics run in base units and payoffs are reported scaled.
  double unit_scale = 1.0;

  double overlay_value(const std::string& key) const {
    auto it = overlay.find(key);
    if (it == overlay.end())
      throw RegistryError(env_id + ": missing overlay key " + key);
    return it->second;
  }

  double overlay_or(const std::string& key, double fallback) const {
    auto it = overlay.find(key);
    return it == overlay.end() ? fallback : it->second;
  }

  // Upper bound of agent i's action in reported units.
  double action_high(int i) const { return endowments.at(i) * unit_scale; }

  bool has_trust() const { return tier != Tier::kTR1; }
  bool has_loyalty() const { return tier == Tier::kTR3; }
  bool has_reciprocity() const { return tier == Tier::kTR4; }
  bool has_public_image() const {
    return kind == EnvKind::kReputationMarket ||
           kind == EnvKind::kIndirectReciprocity;
  }

  // Private-recovery variant: off-diagonal D zeroed, modifiers off.
  EnvConfig without_coupling() const {
    EnvConfig c = *this;
    c.interdependence = interdependence.zeroed();
    c.modifiers_enabled = false;
    return c;
  }
};

namespace detail {

inline InterdependenceMatrix uniform_d(int n, double w) {
  return InterdependenceMatrix(static_cast<std::size_t>(n), w);
}

inline EnvConfig base_config(std::string id, EnvKind kind, Tier tier, int n,
                             int horizon) {
  EnvConfig c;
  c.env_id = std::move(id);
  c.kind = kind;
  c.tier = tier;
  c.n_agents = n;
  c.horizon = horizon;
  c.endowments.assign(n, 100.0);
  c.interdependence = uniform_d(n, 0.5);
  c.value_params = ValueFunctionParams();
  if (tier != Tier::kTR1) c.trust_params = TrustParams();
  if (tier == Tier::kTR3) {
    c.tr3_params = TR3Params();
    c.endowments.assign(n, c.tr3_params->a_max());
  }
  if (tier == Tier::kTR4) c.tr4_params = TR4Params();
  c.overlay["initial_trust"] = 0.5;
  c.overlay["trust_baseline_window"] = 10;
  return c;
}

inline std::vector<EnvConfig> build_registry() {
  std::vector<EnvConfig> r;

  // TR-1: interdependence and complementarity.
  {
    auto c = base_config("PartnerHoldUp-v0", EnvKind::kPartnerHoldUp,
                         Tier::kTR1, 2, 100);
    c.overlay["weak_dependency"] = 0.85;
    c.overlay["strong_dependency"] = 0.35;
    c.interdependence = InterdependenceMatrix::from_rows(
        {{1.0, 0.35}, {0.85, 1.0}});
    r.push_back(std::move(c));
  }
  {
    auto c = base_config("PlatformEcosystem-v0", EnvKind::kPlatformEcosystem,
                         Tier::kTR1, 5, 100);
    c.overlay["developer_dependency"] = 0.75;
    c.overlay["platform_dependency"] = 0.2;
    c.overlay["peer_dependency"] = 0.1;
    InterdependenceMatrix d(5, 0.1);
    for (std::size_t j = 1; j < 5; ++j) {
      d.set(0, j, 0.2);
      d.set(j, 0, 0.75);
    }
    c.interdependence = d;
    r.push_back(std::move(c));
  }
  {
    auto c = base_config("DynamicPartnerSelection-v0",
                         EnvKind::kDynamicPartnerSelection, Tier::kTR1, 4, 100);
    c.overlay["reputation_weight"] = 0.5;
    // Reputation for matching is tracked with the default trust dynamics.
    c.trust_params = TrustParams();
    r.push_back(std::move(c));
  }
  {
    auto c = base_config("SynergySearch-v0", EnvKind::kSynergySearch,
                         Tier::kTR1, 2, 100);
    c.overlay["gamma_low"] = 0.2;
    c.overlay["gamma_high"] = 0.65;
    c.overlay["reveal_gamma_in_obs"] = 0.0;
    r.push_back(std::move(c));
  }
  {
    auto c = base_config("RenaultNissan-v0", EnvKind::kRenaultNissan,
                         Tier::kTR1, 2, 60);
    c.interdependence = InterdependenceMatrix::from_rows(
        {{1.0, 0.55}, {0.70, 1.0}});
    r.push_back(std::move(c));
  }

  // TR-2: trust and reputation.
  {
    auto c = base_config("TrustDilemma-v0", EnvKind::kTrustDilemma,
                         Tier::kTR2, 2, 100);
    c.overlay["collapse_threshold"] = 0.01;
    r.push_back(std::move(c));
  }
  {
    auto c = base_config("RecoveryRace-v0", EnvKind::kRecoveryRace, Tier::kTR2,
                         2, 150);
    c.overlay["initial_trust"] = 0.05;
    c.overlay["recovery_target"] = 0.90;
    c.overlay["recovery_bonus_fraction"] = 0.5;
    r.push_back(std::move(c));
  }
  {
    auto c = base_config("SLCD-v0", EnvKind::kSLCD, Tier::kTR2, 2, 40);
    // Row 0 = Samsung, row 1 = Sony.
    c.interdependence = InterdependenceMatrix::from_rows(
        {{1.0, 0.64}, {0.86, 1.0}});
    r.push_back(std::move(c));
  }
  {
    auto c = base_config("CooperativeNegotiation-v0",
                         EnvKind::kCooperativeNegotiation, Tier::kTR2, 2, 100);
    c.overlay["breach_drop_fraction"] = 0.25;
    c.overlay["breach_cost_fraction"] = 0.1;
    r.push_back(std::move(c));
  }
  {
    auto c = base_config("ReputationMarket-v0", EnvKind::kReputationMarket,
                         Tier::kTR2, 2, 100);
    r.push_back(std::move(c));
  }

  // TR-3: collective action and loyalty.
  {
    auto c = base_config("TeamProduction-v0", EnvKind::kTeamProduction,
                         Tier::kTR3, 4, 100);
    c.overlay["coordination_threshold"] = 0.5;
    c.overlay["coordination_bonus"] = 0.1;
    c.overlay["loyalty_channel"] = 0.0;
    r.push_back(std::move(c));
  }
  {
    auto c = base_config("LoyaltyTeam-v0", EnvKind::kLoyaltyTeam, Tier::kTR3,
                         4, 100);
    c.overlay["loyalty_channel"] = 1.0;
    c.overlay["loyalty_horizon"] = 10;
    r.push_back(std::move(c));
  }
  {
    auto c = base_config("CoalitionFormation-v0", EnvKind::kCoalitionFormation,
                         Tier::kTR3, 6, 150);
    c.overlay["loyalty_channel"] = 1.0;
    c.overlay["exclusion_threshold"] = 0.2;
    c.overlay["probation_steps"] = 3;
    c.overlay["probation_fraction"] = 0.2;
    r.push_back(std::move(c));
  }
  {
    auto c = base_config("ApacheProject-v0", EnvKind::kApacheProject,
                         Tier::kTR3, 5, 60);
    c.overlay["loyalty_channel"] = 1.0;
    r.push_back(std::move(c));
  }
  {
    auto c = base_config("PublicGoods-v0", EnvKind::kPublicGoods, Tier::kTR3,
                         4, 100);
    c.overlay["loyalty_channel"] = 1.0;
    c.overlay["multiplier"] = 1.6;
    c.overlay["sanction_fraction"] = 0.3;
    c.overlay["sanction_multiplier"] = 0.5;
    r.push_back(std::move(c));
  }

  // TR-4: sequential interaction and reciprocity.
  {
    auto c = base_config("ReciprocalDilemma-v0", EnvKind::kReciprocalDilemma,
                         Tier::kTR4, 2, 100);
    c.overlay["memory_horizon"] = 10;
    c.tr4_params = c.tr4_params->with_window(10);
    r.push_back(std::move(c));
  }
  {
    auto c = base_config("GiftExchange-v0", EnvKind::kGiftExchange, Tier::kTR4,
                         2, 100);
    c.overlay["gift_rate"] = 0.25;
    // Row 0 = employer, row 1 = worker.
    c.interdependence = InterdependenceMatrix::from_rows(
        {{1.0, 0.4}, {0.6, 1.0}});
    r.push_back(std::move(c));
  }
  {
    auto c = base_config("IndirectReciprocity-v0",
                         EnvKind::kIndirectReciprocity, Tier::kTR4, 4, 150);
    r.push_back(std::move(c));
  }
  {
    auto c = base_config("GraduatedSanction-v0", EnvKind::kGraduatedSanction,
                         Tier::kTR4, 6, 200);
    c.overlay["sanction_fraction"] = 0.3;
    c.overlay["sanction_step"] = 0.15;
    c.overlay["sanction_cap"] = 4;
    r.push_back(std::move(c));
  }
  {
    auto c = base_config("AppleAppStore-v0", EnvKind::kAppleAppStore,
                         Tier::kTR4, 3, 66);
    c.overlay["commission_standard"] = 0.30;
    c.overlay["commission_small_business"] = 0.15;
    // Agent 0 = platform, 1 = top-tier developer, 2 = marginal developer.
    c.interdependence = InterdependenceMatrix::from_rows(
        {{1.0, 0.3, 0.2}, {0.85, 1.0, 0.1}, {0.85, 0.1, 1.0}});
    r.push_back(std::move(c));
  }
  return r;
}

}  // namespace detail

// All twenty environments, in tier order. Immutable after first use.
inline const std::vector<EnvConfig>& registry() {
  static const std::vector<EnvConfig> kRegistry = detail::build_registry();
  return kRegistry;
}

inline std::vector<std::string> registered_env_ids() {
  std::vector<std::string> ids;
  for (const auto& c : registry()) ids.push_back(c.env_id);
  return ids;
}

inline const EnvConfig& lookup_env(std::string_view env_id) {
  for (const auto& c : registry())
    if (c.env_id == env_id) return c;
  throw RegistryError("unknown environment: " + std::string(env_id));
}

}  // namespace coopsim

#endif  // COOPSIM_ENV_CONFIG_HPP_
