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

#ifndef COOPSIM_PAYOFF_HPP_
#define COOPSIM_PAYOFF_HPP_

// Value functions, synergy, integrated utility and the three-mode reward
// layer, plus the return analytics (Gap%, D_ij contribution, D_ij
// calibration).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "coopsim/errors.hpp"
#include "coopsim/matrix.hpp"

namespace coopsim {

enum class ValueSpec { kLogarithmic, kPower };

class ValueFunctionParams {
 public:
  // Defaults: logarithmic form, theta = 20, beta = 0.75, gamma = 0.65.
  ValueFunctionParams() : ValueFunctionParams(ValueSpec::kLogarithmic) {}

  explicit ValueFunctionParams(ValueSpec spec, double theta = 20.0,
                               double beta_power = 0.75, double gamma = 0.65)
      : spec_(spec), theta_(theta), beta_power_(beta_power), gamma_(gamma) {
    if (!(theta > 0.0)) throw DomainError("theta must be > 0");
    if (!(beta_power > 0.0 && beta_power <= 1.0))
      throw DomainError("beta_power must lie in (0, 1]");
    if (!(gamma >= 0.0 && gamma <= 1.0))
      throw DomainError("gamma must lie in [0, 1]");
  }

  ValueSpec spec() const { return spec_; }
  double theta() const { return theta_; }
  double beta_power() const { return beta_power_; }
  double gamma() const { return gamma_; }

  ValueFunctionParams with_gamma(double gamma) const {
    return ValueFunctionParams(spec_, theta_, beta_power_, gamma);
  }

  friend bool operator==(const ValueFunctionParams&,
                         const ValueFunctionParams&) = default;

 private:
  ValueSpec spec_;
  double theta_;
  double beta_power_;
  double gamma_;
};

// Row i holds the weights agent i places on partners' payoffs. The diagonal
// is pinned to 1 and never enters integrated_utility.
class InterdependenceMatrix {
 public:
  InterdependenceMatrix() = default;

  explicit InterdependenceMatrix(std::size_t n, double off_diagonal = 0.0)
      : m_(n, off_diagonal) {
    check(off_diagonal);
    for (std::size_t i = 0; i < n; ++i) m_(i, i) = 1.0;
  }

  static InterdependenceMatrix from_rows(
      const std::vector<std::vector<double>>& rows) {
    InterdependenceMatrix d(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != rows.size())
        throw DomainError("interdependence matrix must be square");
      for (std::size_t j = 0; j < rows.size(); ++j)
        if (i != j) d.set(i, j, rows[i][j]);
    }
    return d;
  }

  std::size_t size() const { return m_.size(); }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  std::span<const double> row(std::size_t i) const { return m_.row(i); }

  void set(std::size_t i, std::size_t j, double w) {
    if (i == j) throw DomainError("diagonal of D is fixed to 1");
    check(w);
    m_(i, j) = w;
  }

  // Copy with every off-diagonal weight zeroed (private-recovery form).
  InterdependenceMatrix zeroed() const { return InterdependenceMatrix(size()); }

  // Mean off-diagonal weight of row i; used as team-dependency weight.
  double row_mean(std::size_t i) const {
    if (size() < 2) return 0.0;
    double s = 0.0;
    for (std::size_t j = 0; j < size(); ++j)
      if (j != i) s += m_(i, j);
    return s / static_cast<double>(size() - 1);
  }

  friend bool operator==(const InterdependenceMatrix&,
                         const InterdependenceMatrix&) = default;

 private:
  static void check(double w) {
    if (!(w >= 0.0 && w <= 1.0))
      throw DomainError("interdependence weights must lie in [0, 1]");
  }

  SquareMatrix m_;
};

enum class RewardMode { kPrivate, kIntegrated, kCooperative };

inline std::string_view to_string(RewardMode m) {
  switch (m) {
    case RewardMode::kPrivate: return "private";
    case RewardMode::kIntegrated: return "integrated";
    case RewardMode::kCooperative: return "cooperative";
  }
  return "?";
}

inline RewardMode parse_reward_mode(std::string_view s) {
  if (s == "private") return RewardMode::kPrivate;
  if (s == "integrated") return RewardMode::kIntegrated;
  if (s == "cooperative") return RewardMode::kCooperative;
  throw RegistryError("unknown reward mode: " + std::string(s));
}

using PayoffVector = std::vector<double>;

// f_i(a): theta*ln(1+a) or a^beta.
inline double individual_value(double a, const ValueFunctionParams& p) {
  if (!(a >= 0.0)) throw DomainError("contribution must be >= 0");
  if (p.spec() == ValueSpec::kLogarithmic) return p.theta() * std::log1p(a);
  return std::pow(a, p.beta_power());
}

// f_i'(a). Infinite at a = 0 for the power form with beta < 1.
inline double individual_value_derivative(double a,
                                          const ValueFunctionParams& p) {
  if (!(a >= 0.0)) throw DomainError("contribution must be >= 0");
  if (p.spec() == ValueSpec::kLogarithmic) return p.theta() / (1.0 + a);
  if (p.beta_power() == 1.0) return 1.0;
  if (a == 0.0) return INFINITY;
  return p.beta_power() * std::pow(a, p.beta_power() - 1.0);
}

// Geometric mean; exactly 0 when any entry is 0.
inline double synergy(std::span<const double> a) {
  if (a.empty()) throw DomainError("synergy of an empty vector");
  double log_sum = 0.0;
  for (double x : a) {
    if (!(x >= 0.0)) throw DomainError("contribution must be >= 0");
    if (x == 0.0) return 0.0;
    log_sum += std::log(x);
  }
  return std::exp(log_sum / static_cast<double>(a.size()));
}

inline double total_value(std::span<const double> a,
                          const ValueFunctionParams& p) {
  double s = 0.0;
  for (double x : a) s += individual_value(x, p);
  return s + p.gamma() * synergy(a);
}

// pi_i + sum_{j != i} D_ij pi_j.
inline double integrated_utility(std::span<const double> pi,
                                 const InterdependenceMatrix& d,
                                 std::size_t i) {
  if (i >= pi.size() || pi.size() != d.size())
    throw DomainError("agent index out of range");
  double u = pi[i];
  for (std::size_t j = 0; j < pi.size(); ++j)
    if (j != i) u += d(i, j) * pi[j];
  return u;
}

inline std::vector<double> reward_vector(std::span<const double> pi,
                                         std::span<const double> modifiers,
                                         const InterdependenceMatrix& d,
                                         RewardMode mode) {
  const std::size_t n = pi.size();
  if (modifiers.size() != n || d.size() != n)
    throw DomainError("reward_vector: length mismatch");
  std::vector<double> r(n);
  switch (mode) {
    case RewardMode::kPrivate:
      r.assign(pi.begin(), pi.end());
      break;
    case RewardMode::kIntegrated:
      for (std::size_t i = 0; i < n; ++i)
        r[i] = integrated_utility(pi, d, i) + modifiers[i];
      break;
    case RewardMode::kCooperative: {
      const double mean =
          std::accumulate(pi.begin(), pi.end(), 0.0) / static_cast<double>(n);
      r.assign(n, mean);
      break;
    }
  }
  return r;
}

// (R_A - R_O) / |R_O| * 100.
inline double gap_percent(double algo_return, double oracle_return) {
  if (oracle_return == 0.0)
    throw DomainError("gap undefined for a zero oracle return");
  return (algo_return - oracle_return) / std::fabs(oracle_return) * 100.0;
}

// Share of an integrated-reward return attributable to partner weighting.
inline double dij_contribution(double r_int, double r_priv) {
  if (r_int == 0.0)
    throw DomainError("contribution undefined for a zero integrated return");
  return (r_int - r_priv) / r_int;
}

// Weighted aggregate of per-dependency-type scores.
inline double calibrate_dij(std::span<const double> weights,
                            std::span<const double> scores) {
  if (weights.empty() || weights.size() != scores.size())
    throw DomainError("calibrate_dij needs equal-length nonempty lists");
  double wsum = 0.0, acc = 0.0;
  double lo = scores[0], hi = scores[0];
  for (std::size_t k = 0; k < weights.size(); ++k) {
    lo = std::min(lo, scores[k]);
    hi = std::max(hi, scores[k]);
    if (!(weights[k] >= 0.0)) throw DomainError("weights must be >= 0");
    if (!(scores[k] >= 0.0 && scores[k] <= 1.0))
      throw DomainError("scores must lie in [0, 1]");
    wsum += weights[k];
    acc += weights[k] * scores[k];
  }
  if (!(wsum > 0.0)) throw DomainError("weights sum to zero");
  // A convex combination; clamp away the last-ulp rounding.
  return std::clamp(acc / wsum, lo, hi);
}

}  // namespace coopsim

#endif  // COOPSIM_PAYOFF_HPP_
