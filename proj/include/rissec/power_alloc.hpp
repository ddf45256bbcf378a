// SPDX-License-Identifier: Apache-2.0
//
// rissec: secrecy-rate optimization for RIS-assisted multi-user downlinks
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Secrecy water-filling over normalized shares p_k = P_k / Ptot:
//
//   max sum_k log2(1 + a_k p_k) - log2(1 + b_k p_k)  s.t.  sum p_k = 1, 0 <= p_k <= 1.
//
// Users with a_k <= b_k get nothing. On the active set every term is strictly
// concave; an interior share solves (1 + a p)(1 + b p) = (a - b) / (mu ln 2)
// and the common water level mu is the root of the decreasing function
// phi(mu) = sum_k clip(p_k(mu), 0, 1) - 1, found by bisection.

#pragma once

#include "rissec/config.hpp"
#include "rissec/rates.hpp"
#include "rissec/types.hpp"

#include <cmath>
#include <vector>

namespace rissec {

struct PowerCoefficients {
  RealVector a;  // Ptot |psiB w|^2 / sigmaB^2
  RealVector b;  // Ptot ||psiE w||^2 / (sigmaE^2 + sigmaJ^2)
};

struct PowerAllocation {
  RealVector shares;  // normalized, sum to 1
  double mu = 0.0;
  std::vector<int> active_set;
  bool degenerate_all_inactive = false;
  int bisection_steps = 0;
};

inline PowerCoefficients compute_coefficients(const std::vector<EffectiveLinks>& links,
                                              const std::vector<ComplexVector>& w, const SystemConfig& cfg,
                                              const RealVector& jamming) {
  const auto K = static_cast<Eigen::Index>(links.size());
  require(static_cast<Eigen::Index>(w.size()) == K && jamming.size() == K, ErrorCode::DimensionMismatch,
          "coefficient inputs disagree on K");
  PowerCoefficients c;
  c.a.resize(K);
  c.b.resize(K);
  for (Eigen::Index k = 0; k < K; ++k) {
    const auto& l = links[static_cast<size_t>(k)];
    const auto& wk = w[static_cast<size_t>(k)];
    c.a(k) = cfg.total_power * std::norm((l.psiB * wk)(0)) / cfg.noise_var_bob;
    c.b(k) = cfg.total_power * (l.psiE * wk).squaredNorm() / (cfg.noise_var_eve + jamming(k));
  }
  return c;
}

inline PowerCoefficients compute_coefficients(const ChannelSet& ch, const PhaseVector& v,
                                              const std::vector<ComplexVector>& w, double beta,
                                              const SystemConfig& cfg, const RealVector& jamming) {
  std::vector<EffectiveLinks> links;
  for (int k = 0; k < ch.users(); ++k) links.push_back(effective_links(ch, v, beta, k));
  return compute_coefficients(links, w, cfg, jamming);
}

/// Nonnegative root of a b p^2 + (a + b) p + 1 - (a - b)/c = 0 with c = mu ln 2,
/// in the cancellation-free form 2((a-b)/c - 1) / ((a+b) + sqrt(disc)). At
/// b = 0 this is the classical 1/(mu ln 2) - 1/a. Negative when mu is above
/// the level at which the user switches on.
inline double interior_share(double mu, double a, double b) {
  require(a > b && b >= 0.0, ErrorCode::InvalidCoefficients, "interior share needs a > b >= 0");
  require(mu > 0.0, ErrorCode::NonPositive, "water level must be > 0");
  const double c = mu * kLn2;
  const double d = a - b;
  const double disc = d * d + 4.0 * a * b * d / c;
  return 2.0 * (d / c - 1.0) / ((a + b) + std::sqrt(disc));
}

/// Sum of projected shares over the active set.
inline double phi(double mu, const PowerCoefficients& coeffs) {
  double total = 0.0;
  for (Eigen::Index k = 0; k < coeffs.a.size(); ++k) {
    if (!(coeffs.a(k) > coeffs.b(k))) continue;
    total += std::clamp(interior_share(mu, coeffs.a(k), coeffs.b(k)), 0.0, 1.0);
  }
  return total;
}

inline double secrecy_objective(const RealVector& shares, const PowerCoefficients& c) {
  double f = 0.0;
  for (Eigen::Index k = 0; k < shares.size(); ++k)
    f += std::log2(1.0 + c.a(k) * shares(k)) - std::log2(1.0 + c.b(k) * shares(k));
  return f;
}

inline PowerAllocation allocate(const PowerCoefficients& coeffs, double water_tol) {
  const Eigen::Index K = coeffs.a.size();
  require(coeffs.b.size() == K, ErrorCode::DimensionMismatch, "a and b lengths differ");
  require(coeffs.a.allFinite() && coeffs.b.allFinite(), ErrorCode::InvalidCoefficients,
          "power coefficients must be finite");
  require(water_tol > 0.0, ErrorCode::InvalidConfig, "water_tol must be > 0");

  PowerAllocation out;
  out.shares = RealVector::Zero(K);
  for (Eigen::Index k = 0; k < K; ++k)
    if (coeffs.a(k) > coeffs.b(k)) out.active_set.push_back(static_cast<int>(k));

  if (out.active_set.empty()) {
    // Secrecy is zero whatever we do; keep transmitting with equal shares.
    out.shares.setConstant(1.0 / static_cast<double>(K));
    out.degenerate_all_inactive = true;
    return out;
  }
  if (out.active_set.size() == 1) {
    out.shares(out.active_set.front()) = 1.0;
    return out;
  }

  // phi decreases from >= 1 (mu -> 0) to 0 (mu -> inf).
  double lo = 1e-6;
  double hi = 1e6;
  while (phi(lo, coeffs) < 1.0 && lo > 1e-12) lo = std::max(lo * 1e-2, 1e-12);
  while (phi(hi, coeffs) > 1.0 && hi < 1e12) hi = std::min(hi * 1e2, 1e12);
  const double f_lo = phi(lo, coeffs) - 1.0;
  const double f_hi = phi(hi, coeffs) - 1.0;
  if (f_lo < -water_tol || f_hi > water_tol)
    throw Error(ErrorCode::BracketingFailure, "water level not bracketed in [1e-12, 1e12]");

  double mu = 0.5 * (lo + hi);
  for (int it = 0; it < 400; ++it) {
    // geometric midpoint: the bracket spans many decades
    mu = std::sqrt(lo * hi);
    const double f = phi(mu, coeffs) - 1.0;
    out.bisection_steps = it + 1;
    if (std::abs(f) <= water_tol) break;
    if (f > 0.0) {
      lo = mu;
    } else {
      hi = mu;
    }
    if (hi - lo <= 1e-15 * hi) break;
  }
  out.mu = mu;
  for (int k : out.active_set) out.shares(k) = std::clamp(interior_share(mu, coeffs.a(k), coeffs.b(k)), 0.0, 1.0);
  return out;
}

}  // namespace rissec
