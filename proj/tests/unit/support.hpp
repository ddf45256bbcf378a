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

#include "rissec/rissec.hpp"

#include <catch_amalgamated.hpp>

#include <functional>

namespace testing {

using namespace rissec;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

inline bool throws_code(const std::function<void()>& fn, ErrorCode code) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code() == code;
  }
  return false;
}

/// A well-conditioned random system state for the default geometry.
struct Instance {
  ValidatedConfig cfg;
  ChannelSet ch;
  PhaseVector v;
  BeamformerSet W;
  ComplexVector s;
};

inline Instance random_instance(const SystemConfig& c, std::uint64_t seed, const PathLossConfig& plc = {}) {
  const ValidatedConfig vcfg = validate_config(c);
  const QamConstellation qam(c.qam_order, 1.0 / c.users);
  for (std::uint64_t attempt = 0;; ++attempt) {
    Rng r = Rng(seed).substream(attempt);
    ChannelSet ch = generate_channel_set(vcfg, plc, r);
    PhaseVector v = PhaseVector::random(c.ris_elements, r);
    BeamformerSet W = random_beamformers(c.users, c.antennas_per_user, c.total_power, r);
    ComplexVector s(c.users);
    for (int k = 0; k < c.users; ++k) s(k) = qam.point(qam.random_label(r));
    if (condition_number(interference_channel(ch, v, W.w)) < 1e4) return {vcfg, ch, v, W, s};
  }
}

}  // namespace testing
