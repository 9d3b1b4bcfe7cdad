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

#ifndef COOPSIM_COLLECTIVE_HPP_
#define COOPSIM_COLLECTIVE_HPP_

// Team production, loyalty and the free-riding equilibrium.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "coopsim/errors.hpp"

namespace coopsim {

class TR3Params {
 public:
  TR3Params() : TR3Params(25.0, 0.7, 1.0, 0.8, 0.3, 50.0, 10) {}

  TR3Params(double omega, double beta_scale, double cost_c, double phi_benefit,
            double phi_cost, double a_max, int loyalty_horizon)
      : omega_(omega),
        beta_scale_(beta_scale),
        cost_c_(cost_c),
        phi_benefit_(phi_benefit),
        phi_cost_(phi_cost),
        a_max_(a_max),
        loyalty_horizon_(loyalty_horizon) {
    if (!(beta_scale > 0.0 && beta_scale < 1.0))
      throw DomainError("returns-to-scale must lie in (0, 1)");
    if (!(omega >= 0.0 && cost_c >= 0.0 && phi_benefit >= 0.0 &&
          phi_cost >= 0.0))
      throw DomainError("TR-3 coefficients must be non-negative");
    if (!(a_max > 0.0)) throw DomainError("a_max must be > 0");
    if (loyalty_horizon < 1) throw DomainError("loyalty horizon must be >= 1");
  }

  double omega() const { return omega_; }
  double beta_scale() const { return beta_scale_; }
  double cost_c() const { return cost_c_; }
  double phi_benefit() const { return phi_benefit_; }
  double phi_cost() const { return phi_cost_; }
  double a_max() const { return a_max_; }
  int loyalty_horizon() const { return loyalty_horizon_; }

  friend bool operator==(const TR3Params&, const TR3Params&) = default;

 private:
  double omega_;
  double beta_scale_;
  double cost_c_;
  double phi_benefit_;
  double phi_cost_;
  double a_max_;
  int loyalty_horizon_;
};

// Q(a) = omega * (sum a)^beta.
inline double team_production(std::span<const double> a, const TR3Params& p) {
  double total = 0.0;
  for (double x : a) {
    if (!(x >= 0.0 && x <= p.a_max()))
      throw DomainError("contribution outside [0, a_max]");
    total += x;
  }
  return p.omega() * std::pow(total, p.beta_scale());
}

inline double team_payoff(std::span<const double> a, std::size_t i,
                          const TR3Params& p) {
  if (i >= a.size()) throw DomainError("agent index out of range");
  return team_production(a, p) / static_cast<double>(a.size()) -
         p.cost_c() * a[i];
}

inline double teammate_average(std::span<const double> payoffs,
                               std::size_t i) {
  if (payoffs.size() < 2) throw DomainError("teammate average needs n >= 2");
  if (i >= payoffs.size()) throw DomainError("agent index out of range");
  double s = 0.0;
  for (std::size_t j = 0; j < payoffs.size(); ++j)
    if (j != i) s += payoffs[j];
  return s / static_cast<double>(payoffs.size() - 1);
}

// L_i = theta_i * (phi_B * pbar_{-i} + phi_C * c * a_i).
inline double loyalty_modifier(double theta, double teammate_avg, double a_i,
                               const TR3Params& p) {
  if (!(theta >= 0.0 && theta <= 1.0))
    throw DomainError("loyalty must lie in [0, 1]");
  return theta * (p.phi_benefit() * teammate_avg +
                  p.phi_cost() * p.cost_c() * a_i);
}

// (omega*beta / (n*c))^(1/(1-beta)), evaluated literally. This is the total
// contribution n*a* at which the private first-order condition holds.
inline double nash_formula(const TR3Params& p, int n) {
  if (!(p.beta_scale() < 1.0)) throw DomainError("requires beta < 1");
  if (n < 1) throw DomainError("requires n >= 1");
  return std::pow(p.omega() * p.beta_scale() / (n * p.cost_c()),
                  1.0 / (1.0 - p.beta_scale()));
}

struct BestResponseOptions {
  double tol = 1e-8;
  int max_iterations = 10000;
};

namespace detail {

// argmax_{x in [0, a_max]} Q(x + others)/n - c*x by bisection on the
// (decreasing) marginal payoff.
inline double deviator_argmax(double others, int n, const TR3Params& p) {
  auto marginal = [&](double x) {
    const double total = x + others;
    if (total <= 0.0) return std::numeric_limits<double>::infinity();
    return p.omega() * p.beta_scale() * std::pow(total, p.beta_scale() - 1.0) /
               n -
           p.cost_c();
  };
  double lo = 0.0, hi = p.a_max();
  if (marginal(lo) <= 0.0) return 0.0;
  if (marginal(hi) >= 0.0) return hi;
  for (int k = 0; k < 200 && hi - lo > 0.0; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (marginal(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

// Per-agent symmetric equilibrium contribution found by damped iteration of
// the deviator best response. Throws ConvergenceError with the last iterate
// if max_iterations is exhausted.
inline double best_response_symmetric(const TR3Params& p, int n,
                                      BestResponseOptions opt = {}) {
  if (!(opt.tol > 0.0)) throw DomainError("tol must be > 0");
  if (n < 1) throw DomainError("requires n >= 1");
  const double damping = 0.5 / std::max(1, n - 1);
  double a = 0.5 * p.a_max();
  for (int it = 1; it <= opt.max_iterations; ++it) {
    const double br = detail::deviator_argmax((n - 1) * a, n, p);
    const double next = (1.0 - damping) * a + damping * br;
    if (std::fabs(next - a) < opt.tol) return next;
    a = next;
  }
  throw ConvergenceError("symmetric best response did not converge", a,
                         opt.max_iterations);
}

// Sum D_T,i theta_i / Sum D_T,i.
inline double cohesion(std::span<const double> team_dependency,
                       std::span<const double> theta) {
  if (team_dependency.size() != theta.size())
    throw DomainError("cohesion: length mismatch");
  double wsum = 0.0, acc = 0.0;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    if (!(team_dependency[i] >= 0.0))
      throw DomainError("team-dependency weights must be >= 0");
    wsum += team_dependency[i];
    acc += team_dependency[i] * theta[i];
  }
  if (!(wsum > 0.0)) throw DomainError("team-dependency weights sum to zero");
  return acc / wsum;
}

// Per-agent trailing window of a_i / a_max.
class LoyaltyState {
 public:
  LoyaltyState() = default;
  LoyaltyState(std::size_t n, int horizon) : horizon_(horizon), windows_(n) {}

  std::size_t size() const { return windows_.size(); }

  void record(std::size_t i, double action, double a_max) {
    auto& w = windows_.at(i);
    w.push_back(std::clamp(action / a_max, 0.0, 1.0));
    while (static_cast<int>(w.size()) > horizon_) w.pop_front();
  }

  void record_all(std::span<const double> actions, double a_max) {
    for (std::size_t i = 0; i < actions.size(); ++i)
      record(i, actions[i], a_max);
  }

  // Mean over the available history; 0 before any action is recorded.
  double theta(std::size_t i) const {
    const auto& w = windows_.at(i);
    if (w.empty()) return 0.0;
    return std::accumulate(w.begin(), w.end(), 0.0) /
           static_cast<double>(w.size());
  }

  std::vector<double> thetas() const {
    std::vector<double> out(size());
    for (std::size_t i = 0; i < size(); ++i) out[i] = theta(i);
    return out;
  }

  std::size_t history_length(std::size_t i) const {
    return windows_.at(i).size();
  }

  void reset_agent(std::size_t i, std::span<const double> fractions) {
    auto& w = windows_.at(i);
    w.assign(fractions.begin(), fractions.end());
    while (static_cast<int>(w.size()) > horizon_) w.pop_front();
  }

 private:
  int horizon_ = 10;
  std::vector<std::deque<double>> windows_;
};

}  // namespace coopsim

#endif  // COOPSIM_COLLECTIVE_HPP_
