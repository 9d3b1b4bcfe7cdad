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

#ifndef COOPSIM_RECIPROCITY_HPP_
#define COOPSIM_RECIPROCITY_HPP_

// Memory-bounded reciprocity: windowed baseline, bounded tanh response,
// dependency-scaled sensitivity and the trust-gated modifier.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <numeric>
#include <span>
#include <vector>

#include "coopsim/errors.hpp"

namespace coopsim {

class TR4Params {
 public:
  TR4Params() : TR4Params(1.0, 1.0, 1.0, 5, 1.0, 0.6) {}

  TR4Params(double rho0, double eta, double kappa_r, int k_window,
            double lambda_r, double omega_amp)
      : rho0_(rho0),
        eta_(eta),
        kappa_r_(kappa_r),
        k_window_(k_window),
        lambda_r_(lambda_r),
        omega_amp_(omega_amp) {
    if (!(rho0 > 0.0 && eta > 0.0 && kappa_r > 0.0 && lambda_r > 0.0 &&
          omega_amp > 0.0))
      throw DomainError("TR-4 parameters must be positive");
    if (k_window < 1) throw DomainError("memory window must be >= 1");
  }

  double rho0() const { return rho0_; }
  double eta() const { return eta_; }
  double kappa_r() const { return kappa_r_; }
  int k_window() const { return k_window_; }
  double lambda_r() const { return lambda_r_; }
  double omega_amp() const { return omega_amp_; }

  TR4Params with_window(int k) const {
    return TR4Params(rho0_, eta_, kappa_r_, k, lambda_r_, omega_amp_);
  }

  friend bool operator==(const TR4Params&, const TR4Params&) = default;

 private:
  double rho0_;
  double eta_;
  double kappa_r_;
  int k_window_;
  double lambda_r_;
  double omega_amp_;
};

// Mean of the last min(k, history.size()) entries. `history` holds a_j(1..t-1)
// in order; it must be nonempty (step t >= 2).
inline double windowed_baseline(std::span<const double> history, int k) {
  if (k < 1) throw DomainError("memory window must be >= 1");
  if (history.empty())
    throw DomainError("windowed baseline undefined without history");
  const std::size_t m = std::min<std::size_t>(k, history.size());
  const auto first = history.end() - static_cast<std::ptrdiff_t>(m);
  return std::accumulate(first, history.end(), 0.0) / static_cast<double>(m);
}

inline double reciprocity_signal(double action_now, double baseline) {
  return action_now - baseline;
}

inline double bounded_response(double deviation, double kappa_r) {
  if (!(kappa_r > 0.0)) throw DomainError("kappa_r must be > 0");
  return std::tanh(kappa_r * deviation);
}

// rho_ij = rho0 * D_ij^eta.
inline double reciprocity_sensitivity(double d_ij, const TR4Params& p) {
  if (!(d_ij >= 0.0 && d_ij <= 1.0))
    throw DomainError("D_ij must lie in [0, 1]");
  return p.rho0() * std::pow(d_ij, p.eta());
}

// lambda_R * sum_{j != i} T_ij (1 + omega D_ij) rho_ij phi(s_ij).
inline double trust_gated_modifier(std::size_t i,
                                   std::span<const double> trust_row,
                                   std::span<const double> d_row,
                                   std::span<const double> signals,
                                   const TR4Params& p) {
  const std::size_t n = trust_row.size();
  if (d_row.size() != n || signals.size() != n)
    throw DomainError("trust_gated_modifier: row length mismatch");
  if (i >= n) throw DomainError("agent index out of range");
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (j == i) continue;
    acc += trust_row[j] * (1.0 + p.omega_amp() * d_row[j]) *
           reciprocity_sensitivity(d_row[j], p) *
           bounded_response(signals[j], p.kappa_r());
  }
  return p.lambda_r() * acc;
}

inline double complete_utility(double pi_base, double u_interdep,
                               double u_trust, double u_recip) {
  return pi_base + u_interdep + u_trust + u_recip;
}

// Per-agent ring buffer of the last k actions.
class ReciprocityMemory {
 public:
  ReciprocityMemory() = default;
  ReciprocityMemory(std::size_t n, int k) : k_(k), buffers_(n) {
    if (k < 1) throw DomainError("memory window must be >= 1");
  }

  std::size_t size() const { return buffers_.size(); }
  int window() const { return k_; }

  void record(std::span<const double> actions) {
    for (std::size_t j = 0; j < actions.size(); ++j) {
      auto& b = buffers_.at(j);
      b.push_back(actions[j]);
      while (static_cast<int>(b.size()) > k_) b.pop_front();
    }
  }

  // Baseline for agent j; `fallback` (e_j / 2) when no history exists.
  double baseline(std::size_t j, double fallback) const {
    const auto& b = buffers_.at(j);
    if (b.empty()) return fallback;
    const std::vector<double> v(b.begin(), b.end());
    return windowed_baseline(v, k_);
  }

  std::vector<double> history(std::size_t j) const {
    const auto& b = buffers_.at(j);
    return {b.begin(), b.end()};
  }

 private:
  int k_ = 5;
  std::vector<std::deque<double>> buffers_;
};

}  // namespace coopsim

#endif  // COOPSIM_RECIPROCITY_HPP_
