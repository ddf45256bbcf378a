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

#include "rissec/rates.hpp"
#include "rissec/types.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>

namespace rissec {

/// X_B = I + (P/sigmaB^2) psiB^H psiB and X_E = I + (P/(sigmaE^2+sigmaJ^2)) psiE^H psiE.
struct SecrecyMatrices {
  ComplexMatrix XB;
  ComplexMatrix XE;
};

inline SecrecyMatrices build_secrecy_matrices(const EffectiveLinks& links, double Pk, double sigmaB2, double sigmaE2,
                                              double sigmaJ2) {
  require(Pk >= 0.0, ErrorCode::NonPositive, "power must be >= 0");
  require(sigmaB2 > 0.0 && sigmaE2 > 0.0 && sigmaJ2 >= 0.0, ErrorCode::NonPositive, "variances must be > 0");
  const Eigen::Index nt = links.psiB.size();
  SecrecyMatrices m;
  m.XB = ComplexMatrix::Identity(nt, nt);
  m.XB.noalias() += (Pk / sigmaB2) * (links.psiB.adjoint() * links.psiB);
  m.XE = ComplexMatrix::Identity(nt, nt);
  m.XE.noalias() += (Pk / (sigmaE2 + sigmaJ2)) * (links.psiE.adjoint() * links.psiE);
  return m;
}

inline double rayleigh_quotient(const SecrecyMatrices& m, const ComplexVector& w) {
  return w.dot(m.XB * w).real() / w.dot(m.XE * w).real();
}

/// Rotates w so its first non-negligible entry is real and positive.
inline ComplexVector normalize_phase(ComplexVector w) {
  const double norm = w.norm();
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (std::abs(w(i)) > 1e-12 * norm) {
      w *= std::conj(w(i)) / std::abs(w(i));
      w(i) = std::abs(w(i));
      break;
    }
  }
  return w;
}

/// Unit-norm maximizer of (w^H X_B w) / (w^H X_E w): the dominant generalized
/// eigenvector. X_E = L L^H is factored and the Hermitian pencil
/// L^-1 X_B L^-H is diagonalized, so X_E^-1 X_B is never formed.
inline ComplexVector optimal_beamformer(const SecrecyMatrices& m, double* eigenvalue_out = nullptr) {
  require(m.XB.rows() == m.XB.cols() && m.XE.rows() == m.XE.cols() && m.XB.rows() == m.XE.rows(),
          ErrorCode::DimensionMismatch, "secrecy matrices must be square and equal-sized");
  Eigen::LLT<ComplexMatrix> llt(m.XE);
  if (llt.info() != Eigen::Success) throw Error(ErrorCode::ConvergenceFailure, "X_E is not positive definite");
  const auto L = llt.matrixL();
  ComplexMatrix C = L.solve(m.XB);
  C = L.solve(C.adjoint().eval()).eval();  // L^-1 X_B L^-H (X_B Hermitian)
  C = 0.5 * (C + C.adjoint()).eval();

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(C);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::ConvergenceFailure, "eigen-decomposition did not converge");
  const Eigen::Index top = C.rows() - 1;  // eigenvalues ascend
  ComplexVector w = llt.matrixU().solve(es.eigenvectors().col(top));
  w.normalize();
  if (eigenvalue_out) *eigenvalue_out = es.eigenvalues()(top);
  return normalize_phase(std::move(w));
}

/// ||X_B w - lambda X_E w|| / ||X_B w|| at lambda = the quotient of w.
inline double generalized_residual(const SecrecyMatrices& m, const ComplexVector& w) {
  const double lambda = rayleigh_quotient(m, w);
  return (m.XB * w - lambda * (m.XE * w)).norm() / (m.XB * w).norm();
}

}  // namespace rissec
