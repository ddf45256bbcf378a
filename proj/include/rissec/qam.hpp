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

#include "rissec/rng.hpp"
#include "rissec/types.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

namespace rissec {

/// Square Gray-coded QAM. Point i carries label i (bits MSB first); the first
/// half of the bits select the in-phase level, the second half the quadrature
/// level, each Gray coded. Points are scaled so the average energy is
/// `average_energy` (1/K in the multi-user model).
class QamConstellation {
 public:
  QamConstellation(int order, double average_energy) : order_(order) {
    require(order == 4 || order == 16 || order == 64, ErrorCode::BadOrder,
            "QAM order must be 4, 16 or 64, got " + std::to_string(order));
    require(average_energy > 0.0, ErrorCode::NonPositive, "constellation energy must be > 0");
    bits_ = 0;
    while ((1 << bits_) < order) ++bits_;
    const int side = 1 << (bits_ / 2);
    // Mean energy of the unscaled grid {+-1, +-3, ...}^2 is 2 (side^2 - 1) / 3.
    const double scale = std::sqrt(average_energy * 3.0 / (2.0 * (side * side - 1)));
    points_.resize(static_cast<size_t>(order));
    for (int label = 0; label < order; ++label) {
      const int half = bits_ / 2;
      const int i_gray = label >> half;
      const int q_gray = label & ((1 << half) - 1);
      const int i_level = gray_to_binary(i_gray);
      const int q_level = gray_to_binary(q_gray);
      points_[static_cast<size_t>(label)] =
          scale * cdouble(2.0 * i_level - (side - 1), 2.0 * q_level - (side - 1));
    }
  }

  int order() const noexcept { return order_; }
  int bits_per_symbol() const noexcept { return bits_; }
  const std::vector<cdouble>& points() const noexcept { return points_; }
  cdouble point(int label) const { return points_.at(static_cast<size_t>(label)); }

  /// Label of the nearest point; ties go to the lowest label.
  int nearest(cdouble y) const {
    int best = 0;
    double best_d = std::norm(y - points_[0]);
    for (int i = 1; i < order_; ++i) {
      const double d = std::norm(y - points_[static_cast<size_t>(i)]);
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    return best;
  }

  int random_label(Rng& rng) const { return rng.uniform_int(order_); }

 private:
  static int gray_to_binary(int g) {
    int b = 0;
    for (; g != 0; g >>= 1) b ^= g;
    return b;
  }

  int order_;
  int bits_;
  std::vector<cdouble> points_;
};

}  // namespace rissec
