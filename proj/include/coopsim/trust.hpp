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

#ifndef COOPSIM_TRUST_HPP_
#define COOPSIM_TRUST_HPP_

// Two-layer trust: immediate trust T with a 3:1 negativity-biased update
// and an exponentially smoothed reputation R.

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "coopsim/errors.hpp"
#include "coopsim/matrix.hpp"

namespace coopsim {

class TrustParams {
 public:
  TrustParams() : TrustParams(1.0, 0.10, 0.30, 0.05) {}

  TrustParams(double kappa, double lambda_plus, double lambda_minus,
              double mu_reputation)
      : kappa_(kappa),
        lambda_plus_(lambda_plus),
        lambda_minus_(lambda_minus),
        mu_reputation_(mu_reputation) {
    if (!(kappa > 0.0)) throw DomainError("kappa must be > 0");
    auto unit = [](double x) { return x > 0.0 && x <= 1.0; };
    if (!unit(lambda_plus) || !unit(lambda_minus))
      throw DomainError("trust rates must lie in (0, 1]");
    if (!unit(mu_reputation))
      throw DomainError("reputation smoothing must lie in (0, 1]");
  }

  double kappa() const { return kappa_; }
  double lambda_plus() const { return lambda_plus_; }
  double lambda_minus() const { return lambda_minus_; }
  double mu_reputation() const { return mu_reputation_; }

  friend bool operator==(const TrustParams&, const TrustParams&) = default;

 private:
  double kappa_;
  double lambda_plus_;
  double lambda_minus_;
  double mu_reputation_;
};

// tanh(kappa * (a_j - baseline_j)).
inline double cooperation_signal(double action, double baseline,
                                 double kappa) {
  if (!(kappa > 0.0)) throw DomainError("kappa must be > 0");
  return std::tanh(kappa * (action - baseline));
}

inline double update_trust(double trust, double signal,
                           const TrustParams& p) {
  const double build = p.lambda_plus() * std::max(0.0, signal) * (1.0 - trust);
  const double erode = p.lambda_minus() * std::max(0.0, -signal) * trust;
  // The multiplicative form already keeps T in [0, 1]; the clamp only
  // absorbs rounding at the endpoints.
  return std::clamp(trust + build - erode, 0.0, 1.0);
}

inline double update_reputation(double reputation, double trust, double mu) {
  return std::clamp((1.0 - mu) * reputation + mu * trust, 0.0, 1.0);
}

// Directed trust T(i, j): agent i's trust in agent j. Diagonal unused.
struct TrustState {
  SquareMatrix trust;
  SquareMatrix reputation;

  TrustState() = default;
  TrustState(std::size_t n, double initial)
      : trust(n, initial), reputation(n, initial) {}

  std::size_t size() const { return trust.size(); }

  // Applies signals(i, j) (i observing j) to every off-diagonal pair, then
  // smooths reputation toward the new trust.
  void update(const SquareMatrix& signals, const TrustParams& p) {
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        trust(i, j) = update_trust(trust(i, j), signals(i, j), p);
        reputation(i, j) =
            update_reputation(reputation(i, j), trust(i, j), p.mu_reputation());
      }
    }
  }

  // Mean trust the other agents place in agent j.
  double incoming_trust(std::size_t j) const {
    return column_mean(trust, j);
  }

  // Public reputation of agent j: column mean of R.
  double public_reputation(std::size_t j) const {
    return column_mean(reputation, j);
  }

  bool all_below(double threshold) const {
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t j = 0; j < size(); ++j)
        if (i != j && !(trust(i, j) < threshold)) return false;
    return true;
  }

  bool all_at_least(double threshold) const {
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t j = 0; j < size(); ++j)
        if (i != j && trust(i, j) < threshold) return false;
    return true;
  }

 private:
  static double column_mean(const SquareMatrix& m, std::size_t j) {
    const std::size_t n = m.size();
    if (n < 2) return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (i != j) s += m(i, j);
    return s / static_cast<double>(n - 1);
  }
};

}  // namespace coopsim

#endif  // COOPSIM_TRUST_HPP_
