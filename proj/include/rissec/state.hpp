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

// Optimization variables shared by every stage: RIS phases, beamformers and
// power split, plus the K x K cascaded interference channel they induce.

#pragma once

#include "rissec/channel.hpp"
#include "rissec/rng.hpp"
#include "rissec/types.hpp"

#include <cmath>
#include <vector>

namespace rissec {

inline constexpr double kUnitModulusTol = 1e-12;

/// RIS reflection vector v with |v_m| = 1. The reflection matrix is
/// Theta = diag(v); see PhaseProblem for how v enters the fractional form.
class PhaseVector {
 public:
  PhaseVector() = default;

  explicit PhaseVector(ComplexVector v) : v_(std::move(v)) {
    for (Eigen::Index m = 0; m < v_.size(); ++m)
      require(std::abs(std::abs(v_(m)) - 1.0) <= kUnitModulusTol, ErrorCode::NotUnitModulus,
              "phase entry " + std::to_string(m) + " has modulus " + std::to_string(std::abs(v_(m))));
  }

  static PhaseVector ones(int M) { return PhaseVector(ComplexVector::Ones(M)); }

  static PhaseVector from_angles(const RealVector& theta) {
    ComplexVector v(theta.size());
    for (Eigen::Index m = 0; m < theta.size(); ++m) v(m) = std::polar(1.0, theta(m));
    return PhaseVector(std::move(v));
  }

  static PhaseVector random(int M, Rng& rng) {
    ComplexVector v(M);
    for (Eigen::Index m = 0; m < M; ++m) v(m) = rng.unit_phase();
    return PhaseVector(std::move(v));
  }

  /// Projects arbitrary nonzero entries onto the unit circle.
  static PhaseVector normalized(const ComplexVector& x) {
    ComplexVector v(x.size());
    for (Eigen::Index m = 0; m < x.size(); ++m) {
      const double r = std::abs(x(m));
      v(m) = r > 0.0 ? x(m) / r : cdouble(1.0, 0.0);
    }
    return PhaseVector(std::move(v));
  }

  const ComplexVector& values() const noexcept { return v_; }
  int size() const noexcept { return static_cast<int>(v_.size()); }
  cdouble operator()(Eigen::Index m) const { return v_(m); }

  RealVector angles() const {
    RealVector theta(v_.size());
    for (Eigen::Index m = 0; m < v_.size(); ++m) theta(m) = std::arg(v_(m));
    return theta;
  }

  double max_modulus_error() const {
    double err = 0.0;
    for (Eigen::Index m = 0; m < v_.size(); ++m) err = std::max(err, std::abs(std::abs(v_(m)) - 1.0));
    return err;
  }

 private:
  ComplexVector v_;
};

/// Per-user unit-norm beamformers w_k (length nt) and absolute powers P_k.
struct BeamformerSet {
  std::vector<ComplexVector> w;
  RealVector powers;

  int users() const { return static_cast<int>(w.size()); }
};

inline ComplexVector random_unit_vector(int n, Rng& rng) {
  ComplexVector w(n);
  for (Eigen::Index i = 0; i < n; ++i) w(i) = rng.complex_normal();
  return w / w.norm();
}

inline RealVector equal_powers(int K, double total_power) { return RealVector::Constant(K, total_power / K); }

inline BeamformerSet random_beamformers(int K, int nt, double total_power, Rng& rng) {
  BeamformerSet set;
  for (int k = 0; k < K; ++k) set.w.push_back(random_unit_vector(nt, rng));
  set.powers = equal_powers(K, total_power);
  return set;
}

inline void check_dimensions(const ChannelSet& ch, const PhaseVector& v, const BeamformerSet& W) {
  require(v.size() == ch.ris_elements(), ErrorCode::DimensionMismatch, "phase vector length != M");
  require(W.users() == ch.users(), ErrorCode::DimensionMismatch, "beamformer count != K");
  require(W.powers.size() == ch.users(), ErrorCode::DimensionMismatch, "power vector length != K");
  for (const auto& w : W.w)
    require(w.size() == ch.antennas_per_user, ErrorCode::DimensionMismatch, "beamformer length != nt");
}

/// a_u = G_u w_u for every user (M x K, column u).
inline ComplexMatrix transmit_footprints(const ChannelSet& ch, const std::vector<ComplexVector>& w) {
  ComplexMatrix a(ch.ris_elements(), ch.users());
  for (int u = 0; u < ch.users(); ++u) a.col(u).noalias() = ch.G_block(u) * w[static_cast<size_t>(u)];
  return a;
}

/// Unit-power cascaded channel H(k, u) = hB_k^H diag(v) G_u w_u. The
/// interference matrix of the precoder is H diag(sqrt(P) * s).
inline ComplexMatrix interference_channel(const ChannelSet& ch, const PhaseVector& v,
                                          const std::vector<ComplexVector>& w) {
  const int K = ch.users();
  const ComplexMatrix a = transmit_footprints(ch, w);
  ComplexMatrix reflected = v.values().asDiagonal() * a;  // diag(v) a_u
  ComplexMatrix H(K, K);
  for (int k = 0; k < K; ++k) H.row(k).noalias() = ch.hB[static_cast<size_t>(k)].adjoint() * reflected;
  return H;
}

}  // namespace rissec
