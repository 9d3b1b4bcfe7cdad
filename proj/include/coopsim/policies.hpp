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

#ifndef COOPSIM_POLICIES_HPP_
#define COOPSIM_POLICIES_HPP_

// Non-learning reference policies: Constant_00..Constant_100, Random,
// TitForTat, and replay of an oracle profile.

#include <charconv>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "coopsim/errors.hpp"
#include "coopsim/oracles.hpp"
#include "coopsim/rng.hpp"

namespace coopsim {

enum class PolicyKind { kConstant, kRandom, kTitForTat, kOracle };

struct PolicySpec {
  PolicyKind kind = PolicyKind::kConstant;
  int pct = 50;                        // kConstant
  std::optional<std::uint64_t> seed;   // kRandom; derived per episode if unset
  OracleName oracle = OracleName::kEquilibrium;  // kOracle

  static PolicySpec constant(int pct) {
    if (pct < 0 || pct > 100)
      throw DomainError("constant policy percentage must be in 0..100");
    PolicySpec s;
    s.kind = PolicyKind::kConstant;
    s.pct = pct;
    return s;
  }
  static PolicySpec random(std::optional<std::uint64_t> seed = std::nullopt) {
    PolicySpec s;
    s.kind = PolicyKind::kRandom;
    s.seed = seed;
    return s;
  }
  static PolicySpec tit_for_tat() {
    PolicySpec s;
    s.kind = PolicyKind::kTitForTat;
    return s;
  }
  static PolicySpec from_oracle(OracleName o) {
    PolicySpec s;
    s.kind = PolicyKind::kOracle;
    s.oracle = o;
    return s;
  }

  // "Constant_50", "Random", "Random:7", "TitForTat", "Oracle_Loyalty".
  static PolicySpec parse(std::string_view text) {
    auto parse_int = [&](std::string_view digits, auto& out) {
      auto [p, ec] =
          std::from_chars(digits.data(), digits.data() + digits.size(), out);
      if (ec != std::errc() || p != digits.data() + digits.size())
        throw RegistryError("malformed policy: " + std::string(text));
    };
    if (text.starts_with("Constant_")) {
      int pct = 0;
      parse_int(text.substr(9), pct);
      return constant(pct);
    }
    if (text == "Random") return random();
    if (text.starts_with("Random:")) {
      std::uint64_t seed = 0;
      parse_int(text.substr(7), seed);
      return random(seed);
    }
    if (text == "TitForTat") return tit_for_tat();
    if (text.starts_with("Oracle_"))
      return from_oracle(parse_oracle_name(text));
    throw RegistryError("unknown policy: " + std::string(text));
  }

  std::string name() const {
    switch (kind) {
      case PolicyKind::kConstant: {
        std::string digits = std::to_string(pct);
        if (digits.size() < 2) digits.insert(0, "0");
        return "Constant_" + digits;
      }
      case PolicyKind::kRandom:
        return seed ? "Random:" + std::to_string(*seed) : "Random";
      case PolicyKind::kTitForTat:
        return "TitForTat";
      case PolicyKind::kOracle:
        return "Oracle_" + std::string(to_string(oracle));
    }
    return "?";
  }

  friend bool operator==(const PolicySpec&, const PolicySpec&) = default;
};

struct AgentContext {
  int agent = 0;
  int t = 0;
  double endowment = 0.0;
  // Partners' previous actions and endowments, index-aligned, excluding the
  // acting agent. Required by TitForTat.
  std::optional<std::vector<double>> partner_previous;
  std::optional<std::vector<double>> partner_endowments;
};

class Policy {
 public:
  explicit Policy(PolicySpec spec, std::uint64_t stream_seed = 0,
                  std::optional<OracleSolution> oracle = std::nullopt)
      : spec_(std::move(spec)),
        rng_(spec_.seed.value_or(stream_seed)),
        oracle_(std::move(oracle)) {
    if (spec_.kind == PolicyKind::kOracle && !oracle_)
      throw DomainError("oracle policy needs a solved profile");
  }

  const PolicySpec& spec() const { return spec_; }

  double act(std::span<const double> /*observation*/, const AgentContext& ctx) {
    switch (spec_.kind) {
      case PolicyKind::kConstant:
        return spec_.pct / 100.0 * ctx.endowment;
      case PolicyKind::kRandom:
        return rng_.uniform(0.0, ctx.endowment);
      case PolicyKind::kTitForTat: {
        if (!ctx.partner_previous || !ctx.partner_endowments)
          throw DomainError("TitForTat needs partners' previous actions");
        if (ctx.t == 0 || ctx.partner_previous->empty())
          return 0.5 * ctx.endowment;
        double ratio = 0.0;
        const auto& prev = *ctx.partner_previous;
        const auto& endow = *ctx.partner_endowments;
        for (std::size_t k = 0; k < prev.size(); ++k)
          ratio += prev[k] / endow.at(k);
        return ratio / static_cast<double>(prev.size()) * ctx.endowment;
      }
      case PolicyKind::kOracle:
        return oracle_->profile.at(ctx.agent);
    }
    return 0.0;
  }

 private:
  PolicySpec spec_;
  Rng rng_;
  std::optional<OracleSolution> oracle_;
};

}  // namespace coopsim

#endif  // COOPSIM_POLICIES_HPP_
