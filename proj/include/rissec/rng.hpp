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

#include "rissec/types.hpp"

#include <cmath>
#include <cstdint>
#include <random>

namespace rissec {

namespace detail {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t mix_key(std::uint64_t key, std::uint64_t index) {
  return splitmix64(key ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

}  // namespace detail

/// Splittable random stream. A stream is identified by a 64-bit key; child
/// streams are derived from (key, index) only, so trial t of a Monte Carlo
/// run draws the same numbers regardless of scheduling or worker count.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : key_(detail::splitmix64(seed)), engine_(key_) {}

  Rng substream(std::uint64_t index) const { return Rng(FromKey{}, detail::mix_key(key_, index)); }

  template <typename... Indices>
  Rng substream(std::uint64_t first, Indices... rest) const {
    if constexpr (sizeof...(rest) == 0) {
      return substream(first);
    } else {
      return substream(first).substream(static_cast<std::uint64_t>(rest)...);
    }
  }

  std::uint64_t key() const noexcept { return key_; }
  std::mt19937_64& engine() noexcept { return engine_; }

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  double normal() { return normal_(engine_); }
  int uniform_int(int n) { return std::uniform_int_distribution<int>(0, n - 1)(engine_); }
  bool bit() { return (engine_() >> 63) != 0; }

  /// Circularly symmetric CN(0,1): real and imaginary parts each N(0, 1/2).
  cdouble complex_normal() {
    constexpr double kHalfSqrt = 0.70710678118654752440;
    const double re = normal();
    const double im = normal();
    return {kHalfSqrt * re, kHalfSqrt * im};
  }

  cdouble unit_phase() {
    const double angle = 2.0 * M_PI * uniform();
    return std::polar(1.0, angle);
  }

 private:
  struct FromKey {};
  Rng(FromKey, std::uint64_t key) : key_(key), engine_(key) {}

  std::uint64_t key_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace rissec
