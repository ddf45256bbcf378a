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

// Wall-clock cost of one inner phase-solver iteration as a function of M.

#pragma once

#include "rissec/channel.hpp"
#include "rissec/config.hpp"
#include "rissec/precoder.hpp"
#include "rissec/rcg.hpp"
#include "rissec/state.hpp"

#include <chrono>
#include <cmath>
#include <vector>

namespace rissec {

struct BenchRow {
  int ris_elements = 0;
  int users = 0;
  long inner_iterations = 0;
  double seconds = 0.0;
  double evaluations_per_iteration = 0.0;

  double seconds_per_iteration() const { return inner_iterations > 0 ? seconds / inner_iterations : 0.0; }
};

/// Phase problems come from channel draws of `base` with M replaced. Each
/// solve runs one SCA refresh of up to opts.rcg_inner_max steps with the
/// gradient tolerance at zero; solves repeat until `min_seconds` have elapsed.
inline BenchRow bench_inner_iteration(const SystemConfig& base, int M, int K, double min_seconds, const Rng& rng) {
  SystemConfig cfg = with_users(base, K);
  cfg.ris_elements = M;
  const ValidatedConfig vcfg = validate_config(cfg);
  SolverOptions opts;
  opts.rcg_outer_max = 1;
  opts.grad_tol = 0.0;

  BenchRow row;
  row.ris_elements = M;
  row.users = K;
  long evaluations = 0;
  for (std::uint64_t rep = 0; row.seconds < min_seconds; ++rep) {
    Rng r = rng.substream(static_cast<std::uint64_t>(M), static_cast<std::uint64_t>(K), rep);
    const ChannelSet ch = generate_channel_set(vcfg, PathLossConfig{}, r);
    const BeamformerSet W = random_beamformers(K, cfg.antennas_per_user, cfg.total_power, r);
    const PhaseVector v0 = PhaseVector::random(M, r);
    RealVector jam;
    try {
      jam = jamming_variance_expected(ch, v0, W, 1.0);
    } catch (const Error&) {
      continue;
    }
    const PhaseProblem p = build_phase_problem(ch, W, 1.0, cfg, jam);
    const auto t0 = std::chrono::steady_clock::now();
    const RcgResult res = rcg_optimize(p, v0, opts, 0.0, false);
    row.seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    row.inner_iterations += res.inner_iterations;
    evaluations += res.surrogate_evaluations;
  }
  row.evaluations_per_iteration =
      row.inner_iterations > 0 ? static_cast<double>(evaluations) / static_cast<double>(row.inner_iterations) : 0.0;
  return row;
}

/// Least-squares slope of log(time per iteration) against log(x).
inline double fitted_exponent(const std::vector<double>& x, const std::vector<double>& t) {
  require(x.size() == t.size() && x.size() >= 2, ErrorCode::InvalidConfig, "need >= 2 points to fit an exponent");
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(t[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0.0, sxx = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(t[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

}  // namespace rissec
