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

// Geometry of the product of M unit circles {v in C^M : |v_m| = 1}, with the
// real inner product <x, y> = Re{x^H y}. The tangent space at v is
// {chi : Re{chi_m conj(v_m)} = 0 for all m}.

#pragma once

#include "rissec/state.hpp"
#include "rissec/types.hpp"

#include <cmath>

namespace rissec {

inline double real_inner(const ComplexVector& x, const ComplexVector& y) { return x.dot(y).real(); }

/// x - Re{x .* conj(v)} .* v
inline ComplexVector project_tangent(const ComplexVector& v, const ComplexVector& x) {
  ComplexVector out(x.size());
  for (Eigen::Index m = 0; m < x.size(); ++m) out(m) = x(m) - (x(m) * std::conj(v(m))).real() * v(m);
  return out;
}

inline ComplexVector project_tangent(const PhaseVector& v, const ComplexVector& x) {
  return project_tangent(v.values(), x);
}

/// Elementwise normalization (v_m + chi_m) / |v_m + chi_m|. A zero sum (chi_m = -v_m)
/// keeps v_m.
inline PhaseVector retract(const PhaseVector& v, const ComplexVector& chi) {
  ComplexVector out(v.size());
  for (Eigen::Index m = 0; m < chi.size(); ++m) {
    const cdouble z = v(m) + chi(m);
    const double r = std::abs(z);
    out(m) = r > 0.0 ? z / r : v(m);
  }
  return PhaseVector(std::move(out));
}

/// Moves a tangent vector at the old point to the tangent space at `v_new` by
/// projection. Re{conj(chi) .* v} and Re{chi .* conj(v)} are the same real
/// number, so this is also the other common way of writing it.
inline ComplexVector transport(const PhaseVector& /*v_old*/, const PhaseVector& v_new, const ComplexVector& chi) {
  return project_tangent(v_new.values(), chi);
}

/// Largest |Re{x_m conj(v_m)}|; zero for tangent vectors.
inline double tangency_error(const ComplexVector& v, const ComplexVector& x) {
  double err = 0.0;
  for (Eigen::Index m = 0; m < x.size(); ++m) err = std::max(err, std::abs((x(m) * std::conj(v(m))).real()));
  return err;
}

}  // namespace rissec
