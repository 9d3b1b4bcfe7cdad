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

#ifndef COOPSIM_ORACLES_HPP_
#define COOPSIM_ORACLES_HPP_

// Analytic reference profiles. Oracles do not learn: each returns a
// stationary per-agent action profile that is replayed open-loop.
//
//   Equilibrium, Nash, ReciprocityEquilibrium
//       damped simultaneous best response on the tier payoff, modifiers off
//   TrustAware
//       best response with the trust modifier held at trust level T (1.0)
//   Loyalty, SocialOptimum
//       symmetric maximizer of sum_i U_i, loyalty at theta = 1 on TR-3
//   BoundedReciprocity
//       symmetric maximizer of sum_i U_i at zero reciprocity signal
//
// TrustAware and BoundedReciprocity are reconstructions from one-line
// descriptions; see README.

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "coopsim/collective.hpp"
#include "coopsim/env_config.hpp"
#include "coopsim/errors.hpp"
#include "coopsim/payoff.hpp"

namespace coopsim {

enum class OracleName {
  kEquilibrium,
  kTrustAware,
  kNash,
  kLoyalty,
  kSocialOptimum,
  kReciprocityEquilibrium,
  kBoundedReciprocity,
};

inline constexpr std::array<OracleName, 7> kAllOracles = {
    OracleName::kEquilibrium,   OracleName::kTrustAware,
    OracleName::kNash,          OracleName::kLoyalty,
    OracleName::kSocialOptimum, OracleName::kReciprocityEquilibrium,
    OracleName::kBoundedReciprocity};

inline std::string_view to_string(OracleName o) {
  switch (o) {
    case OracleName::kEquilibrium: return "Equilibrium";
    case OracleName::kTrustAware: return "TrustAware";
    case OracleName::kNash: return "Nash";
    case OracleName::kLoyalty: return "Loyalty";
    case OracleName::kSocialOptimum: return "SocialOptimum";
    case OracleName::kReciprocityEquilibrium: return "ReciprocityEquilibrium";
    case OracleName::kBoundedReciprocity: return "BoundedReciprocity";
  }
  return "?";
}

// Accepts "Loyalty" or "Oracle_Loyalty".
inline OracleName parse_oracle_name(std::string_view s) {
  if (s.starts_with("Oracle_")) s.remove_prefix(7);
  for (OracleName o : kAllOracles)
    if (to_string(o) == s) return o;
  throw RegistryError("unknown oracle: " + std::string(s));
}

inline OracleName reference_oracle(const EnvConfig& cfg) {
  switch (cfg.tier) {
    case Tier::kTR1: return OracleName::kEquilibrium;
    case Tier::kTR2: return OracleName::kTrustAware;
    case Tier::kTR3: return OracleName::kLoyalty;
    case Tier::kTR4: return OracleName::kBoundedReciprocity;
  }
  return OracleName::kEquilibrium;
}

inline OracleName reference_oracle(std::string_view env_id) {
  return reference_oracle(lookup_env(env_id));
}

struct OracleOptions {
  double tol = 1e-8;
  int max_iterations = 10000;
  // Trust level at which TrustAware holds the trust modifier.
  double trust_level = 1.0;
};

struct OracleSolution {
  OracleName name = OracleName::kEquilibrium;
  std::string env_id;
  // Stationary action per agent, in reported units.
  std::vector<double> profile;
  int iterations = 0;
  double residual = 0.0;
};

// Stage payoffs of the tier formula with every overlay and modifier off.
// `synergy_factor` scales the synergy share (1 for the plain payoff).
namespace oracle_detail {

inline double synergy_partial(std::span<const double> a, std::size_t i) {
  for (std::size_t j = 0; j < a.size(); ++j)
    if (j != i && a[j] == 0.0) return 0.0;
  if (a[i] == 0.0) return INFINITY;
  return synergy(a) / (static_cast<double>(a.size()) * a[i]);
}

inline double tier_payoff(const EnvConfig& cfg, std::span<const double> a,
                          std::size_t i, double synergy_factor) {
  const double n = static_cast<double>(a.size());
  if (cfg.tier == Tier::kTR3) return team_payoff(a, i, *cfg.tr3_params);
  return (cfg.endowments[i] - a[i]) + individual_value(a[i], cfg.value_params) +
         synergy_factor * cfg.value_params.gamma() / n * synergy(a);
}

inline double tier_marginal(const EnvConfig& cfg, std::span<const double> a,
                            std::size_t i, double synergy_factor) {
  const double n = static_cast<double>(a.size());
  if (cfg.tier == Tier::kTR3) {
    const auto& p = *cfg.tr3_params;
    double total = 0.0;
    for (double x : a) total += x;
    if (total <= 0.0) return p.omega() > 0.0 ? INFINITY : -p.cost_c();
    return p.omega() * p.beta_scale() * std::pow(total, p.beta_scale() - 1.0) /
               n -
           p.cost_c();
  }
  const double gamma_term = synergy_factor * cfg.value_params.gamma() / n;
  double syn = 0.0;
  if (gamma_term != 0.0) syn = gamma_term * synergy_partial(a, i);
  return -1.0 + individual_value_derivative(a[i], cfg.value_params) + syn;
}

// argmax over [0, e_i] of agent i's concave stage payoff, others fixed.
inline double best_response(const EnvConfig& cfg, std::vector<double> a,
                            std::size_t i, double synergy_factor) {
  const double hi_bound = cfg.endowments[i];
  auto marginal = [&](double x) {
    a[i] = x;
    return tier_marginal(cfg, a, i, synergy_factor);
  };
  if (marginal(0.0) <= 0.0) return 0.0;
  if (marginal(hi_bound) >= 0.0) return hi_bound;
  double lo = 0.0, hi = hi_bound;
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (marginal(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

inline OracleSolution iterate_best_response(const EnvConfig& cfg,
                                            double synergy_factor,
                                            const OracleOptions& opt) {
  const std::size_t n = static_cast<std::size_t>(cfg.n_agents);
  const double damping = 0.5 / std::max<std::size_t>(1, n - 1);
  std::vector<double> a(n);
  for (std::size_t i = 0; i < n; ++i) a[i] = 0.5 * cfg.endowments[i];
  OracleSolution sol;
  for (int it = 1; it <= opt.max_iterations; ++it) {
    std::vector<double> next(n);
    double delta = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double br = best_response(cfg, a, i, synergy_factor);
      next[i] = (1.0 - damping) * a[i] + damping * br;
      delta = std::max(delta, std::fabs(next[i] - a[i]));
    }
    a = std::move(next);
    if (delta < opt.tol) {
      sol.profile = a;
      sol.iterations = it;
      sol.residual = delta;
      return sol;
    }
  }
  throw ConvergenceError(cfg.env_id + ": best-response iteration did not converge",
                         a.empty() ? 0.0 : a[0], opt.max_iterations);
}

// sum_i [pi_i + sum_{j != i} D_ij pi_j + L_i(theta = 1)] at a = x * e.
inline double social_objective(const EnvConfig& cfg, double x,
                               bool with_loyalty) {
  const std::size_t n = static_cast<std::size_t>(cfg.n_agents);
  std::vector<double> a(n), pi(n);
  for (std::size_t i = 0; i < n; ++i) a[i] = x * cfg.endowments[i];
  for (std::size_t i = 0; i < n; ++i) pi[i] = tier_payoff(cfg, a, i, 1.0);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    total += integrated_utility(pi, cfg.interdependence, i);
    if (with_loyalty && n >= 2)
      total += loyalty_modifier(1.0, teammate_average(pi, i), a[i],
                                *cfg.tr3_params);
  }
  return total;
}

inline OracleSolution maximize_symmetric(const EnvConfig& cfg,
                                         bool with_loyalty) {
  auto f = [&](double x) { return social_objective(cfg, x, with_loyalty); };
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.0, hi = 1.0;
  double c = hi - inv_phi * (hi - lo), d = lo + inv_phi * (hi - lo);
  double fc = f(c), fd = f(d);
  int it = 0;
  while (hi - lo > 1e-12 && it < 200) {
    ++it;
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }
  double best_x = 0.5 * (lo + hi);
  double best = f(best_x);
  for (double edge : {0.0, 1.0}) {
    const double v = f(edge);
    if (v > best) {
      best = v;
      best_x = edge;
    }
  }
  OracleSolution sol;
  sol.iterations = it;
  sol.residual = hi - lo;
  sol.profile.resize(cfg.n_agents);
  for (int i = 0; i < cfg.n_agents; ++i)
    sol.profile[i] = best_x * cfg.endowments[i];
  return sol;
}

}  // namespace oracle_detail

inline OracleSolution solve_oracle(OracleName name, const EnvConfig& cfg,
                                   const OracleOptions& opt = {}) {
  if (cfg.tier == Tier::kTR3 && !cfg.tr3_params)
    throw DomainError(cfg.env_id + ": TR-3 config lacks TR3 parameters");
  OracleSolution sol;
  switch (name) {
    case OracleName::kEquilibrium:
    case OracleName::kNash:
    case OracleName::kReciprocityEquilibrium:
      sol = oracle_detail::iterate_best_response(cfg, 1.0, opt);
      break;
    case OracleName::kTrustAware:
      // 1 + (T - 0.5): the trust modifier folded into the synergy share.
      sol = oracle_detail::iterate_best_response(
          cfg, 1.0 + (opt.trust_level - 0.5), opt);
      break;
    case OracleName::kLoyalty:
    case OracleName::kSocialOptimum:
      sol = oracle_detail::maximize_symmetric(cfg, cfg.tier == Tier::kTR3);
      break;
    case OracleName::kBoundedReciprocity:
      sol = oracle_detail::maximize_symmetric(cfg, false);
      break;
  }
  sol.name = name;
  sol.env_id = cfg.env_id;
  for (double& x : sol.profile) x *= cfg.unit_scale;
  return sol;
}

}  // namespace coopsim

#endif  // COOPSIM_ORACLES_HPP_
