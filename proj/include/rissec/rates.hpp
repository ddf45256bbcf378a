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

#pragma once

#include "rissec/channel.hpp"
#include "rissec/config.hpp"
#include "rissec/precoder.hpp"
#include "rissec/state.hpp"
#include "rissec/types.hpp"

#include <cmath>

namespace rissec {

/// Cascaded links of user k after precoding and beta scaling:
/// psiB = beta hB_k^H Theta G_k / sqrt(K) (1 x nt), psiE = beta H_E Theta G_k / sqrt(K) (Ne x nt).
struct EffectiveLinks {
  Eigen::RowVectorXcd psiB;
  ComplexMatrix psiE;
};

inline EffectiveLinks effective_links(const ChannelSet& ch, const PhaseVector& v, double beta, int k) {
  require(v.size() == ch.ris_elements(), ErrorCode::DimensionMismatch, "phase vector length != M");
  require(k >= 0 && k < ch.users(), ErrorCode::DimensionMismatch, "user index out of range");
  const double scale = beta / std::sqrt(static_cast<double>(ch.users()));
  const ComplexMatrix reflected = v.values().asDiagonal() * ch.G_block(k);  // Theta G_k
  EffectiveLinks links;
  links.psiB = scale * (ch.hB[static_cast<size_t>(k)].adjoint() * reflected);
  links.psiE = scale * (ch.HE * reflected);
  return links;
}

inline double rate_bob(const Eigen::RowVectorXcd& psiB, const ComplexVector& w, double Pk, double sigmaB2) {
  const double gain = std::norm((psiB * w)(0));
  return std::log2(1.0 + Pk * gain / sigmaB2);
}

inline double rate_eve(const ComplexMatrix& psiE, const ComplexVector& w, double Pk, double sigmaE2,
                       double sigmaJ2) {
  const double gain = (psiE * w).squaredNorm();
  return std::log2(1.0 + Pk * gain / (sigmaE2 + sigmaJ2));
}

struct SecrecyReport {
  RealVector rate_bob;
  RealVector rate_eve;
  RealVector secrecy_per_user;  // [R_B - R_E]^+
  RealVector jamming_variance;
  double sum_rate = 0.0;

  /// Sum of R_B - R_E without the per-user clamp (the optimizer objective).
  double unclamped_sum() const { return (rate_bob - rate_eve).sum(); }
};

inline SecrecyReport secrecy_report(const ChannelSet& ch, const PhaseVector& v, const BeamformerSet& W, double beta,
                                    const RealVector& jamming, const SystemConfig& cfg) {
  check_dimensions(ch, v, W);
  require(jamming.size() == ch.users(), ErrorCode::DimensionMismatch, "jamming vector length != K");
  require(std::abs(W.powers.sum() - cfg.total_power) <= 1e-6 * cfg.total_power, ErrorCode::InvalidConfig,
          "powers must sum to the total power");
  const int K = ch.users();
  SecrecyReport r;
  r.rate_bob.resize(K);
  r.rate_eve.resize(K);
  r.secrecy_per_user.resize(K);
  r.jamming_variance = jamming;
  for (int k = 0; k < K; ++k) {
    const EffectiveLinks links = effective_links(ch, v, beta, k);
    const ComplexVector& w = W.w[static_cast<size_t>(k)];
    r.rate_bob(k) = rate_bob(links.psiB, w, W.powers(k), cfg.noise_var_bob);
    r.rate_eve(k) = rate_eve(links.psiE, w, W.powers(k), cfg.noise_var_eve, jamming(k));
    r.secrecy_per_user(k) = std::max(0.0, r.rate_bob(k) - r.rate_eve(k));
  }
  r.sum_rate = r.secrecy_per_user.sum();
  return r;
}

}  // namespace rissec
