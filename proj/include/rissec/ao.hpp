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

// Alternating optimization of beamformers, power shares and RIS phases, and
// the four comparison schemes built from it.
//
// One outer iteration, with the jamming variance frozen at its value for the
// state the iteration starts from:
//   beamformers -> power shares -> RIS phases -> beamformers -> secrecy rate.
// The reported rate uses the jamming variance of the new state. If that rate
// is below the previous one the iteration is undone and the loop stops.

#pragma once

#include "rissec/beamformer.hpp"
#include "rissec/channel.hpp"
#include "rissec/config.hpp"
#include "rissec/power_alloc.hpp"
#include "rissec/precoder.hpp"
#include "rissec/rates.hpp"
#include "rissec/rcg.hpp"
#include "rissec/state.hpp"
#include "rissec/types.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace rissec {

enum class Scheme { BS, RIS, JOINT, AO };

inline const char* to_string(Scheme s) {
  switch (s) {
    case Scheme::BS: return "bs";
    case Scheme::RIS: return "ris";
    case Scheme::JOINT: return "joint";
    case Scheme::AO: return "ao";
  }
  return "?";
}

inline Scheme parse_scheme(const std::string& name) {
  std::string lower;
  for (char c : name) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (lower == "bs") return Scheme::BS;
  if (lower == "ris") return Scheme::RIS;
  if (lower == "joint") return Scheme::JOINT;
  if (lower == "ao") return Scheme::AO;
  throw Error(ErrorCode::InvalidConfig, "unknown scheme '" + name + "'");
}

inline const std::vector<Scheme>& all_schemes() {
  static const std::vector<Scheme> s{Scheme::BS, Scheme::RIS, Scheme::JOINT, Scheme::AO};
  return s;
}

struct AoFlags {
  bool update_beamformers = true;
  bool update_powers = true;
  bool update_phases = true;
};

struct AoResult {
  double final_rate = 0.0;
  BeamformerSet W;
  PhaseVector v;
  SecrecyReport report;
  std::vector<double> outer_trace;  // entry 0: initial state
  int iterations = 0;
  bool converged = false;
  int rcg_rejections = 0;       // phase solves that stopped on a rate decrease
  int outer_rejections = 0;     // outer iterations undone
  int power_rejections = 0;     // water-filling steps that did not raise the rate
  int rcg_stalls = 0;
  std::optional<Error> failure;  // set when a sub-step threw; state is the last good one
};

/// Beamformer update for every user at the current phases and powers. A user
/// with zero power keeps its previous vector.
inline void update_beamformers(const ChannelSet& ch, const PhaseVector& v, double beta, const SystemConfig& cfg,
                               const RealVector& jamming, BeamformerSet& W) {
  for (int k = 0; k < ch.users(); ++k) {
    if (!(W.powers(k) > 0.0)) continue;
    const EffectiveLinks links = effective_links(ch, v, beta, k);
    const SecrecyMatrices m = build_secrecy_matrices(links, W.powers(k), cfg.noise_var_bob, cfg.noise_var_eve,
                                                     jamming(k));
    W.w[static_cast<size_t>(k)] = optimal_beamformer(m);
  }
}

inline RealVector update_powers(const ChannelSet& ch, const PhaseVector& v, const BeamformerSet& W, double beta,
                                const SystemConfig& cfg, const RealVector& jamming, double water_tol) {
  const PowerCoefficients c = compute_coefficients(ch, v, W.w, beta, cfg, jamming);
  const PowerAllocation alloc = allocate(c, water_tol);
  return cfg.total_power * alloc.shares / alloc.shares.sum();
}

/// Runs the alternating loop from (v0, W0). W0's powers are replaced by equal
/// shares. Beamformer and power updates are skipped when disabled in `flags`.
inline AoResult alternating_optimize(const ValidatedConfig& vcfg, const ChannelSet& ch, double beta,
                                     const SolverOptions& opts, const PhaseVector& v0, BeamformerSet W0,
                                     AoFlags flags = {}) {
  const SystemConfig& cfg = vcfg.get();
  W0.powers = equal_powers(cfg.users, cfg.total_power);
  check_dimensions(ch, v0, W0);

  AoResult res;
  res.v = v0;
  res.W = std::move(W0);
  try {
    RealVector jam = jamming_for_state(ch, res.v, res.W, beta, cfg, opts.jamming_model).variance;
    if (flags.update_beamformers) {
      update_beamformers(ch, res.v, beta, cfg, jam, res.W);
      jam = jamming_for_state(ch, res.v, res.W, beta, cfg, opts.jamming_model).variance;
    }
    res.report = secrecy_report(ch, res.v, res.W, beta, jam, cfg);
    res.final_rate = res.report.sum_rate;
    res.outer_trace.push_back(res.final_rate);

    for (int t = 0; t < opts.ao_max_iterations; ++t) {
      PhaseVector v = res.v;
      BeamformerSet W = res.W;
      // `jam` belongs to the accepted state (v, W) here.
      if (flags.update_beamformers) update_beamformers(ch, v, beta, cfg, jam, W);
      if (flags.update_powers) {
        // Water-filling sees the frozen jamming variance; keep the new shares
        // only if they also win once the variance follows the powers.
        BeamformerSet candidate = W;
        candidate.powers = update_powers(ch, v, W, beta, cfg, jam, opts.water_tol);
        const auto rate_with = [&](const BeamformerSet& set) {
          const RealVector j = jamming_for_state(ch, v, set, beta, cfg, opts.jamming_model).variance;
          return secrecy_report(ch, v, set, beta, j, cfg).sum_rate;
        };
        if (rate_with(candidate) > rate_with(W)) {
          W = std::move(candidate);
        } else {
          ++res.power_rejections;
        }
      }
      if (flags.update_phases) {
        const PhaseProblem problem = build_phase_problem(ch, W, beta, cfg, jam);
        RcgResult r = rcg_optimize(problem, v, opts, cfg.epsilon, false);
        res.rcg_rejections += r.rejected_outer_step ? 1 : 0;
        res.rcg_stalls += r.line_search_stalls;
        v = std::move(r.v);
      }
      if (flags.update_beamformers) update_beamformers(ch, v, beta, cfg, jam, W);

      const RealVector jam_new = jamming_for_state(ch, v, W, beta, cfg, opts.jamming_model).variance;
      SecrecyReport report = secrecy_report(ch, v, W, beta, jam_new, cfg);
      ++res.iterations;
      const double prev = res.final_rate;
      if (report.sum_rate < prev) {
        ++res.outer_rejections;
        res.converged = true;
        break;
      }
      res.v = std::move(v);
      res.W = std::move(W);
      res.report = std::move(report);
      res.final_rate = res.report.sum_rate;
      res.outer_trace.push_back(res.final_rate);
      jam = jam_new;
      if (std::abs(res.final_rate - prev) < cfg.epsilon) {
        res.converged = true;
        break;
      }
    }
  } catch (const Error& e) {
    res.failure = e;
  }
  return res;
}

/// Overload with all-ones phases and the supplied beamformer directions.
inline AoResult alternating_optimize(const ValidatedConfig& vcfg, const ChannelSet& ch, double beta,
                                     const SolverOptions& opts, BeamformerSet W0) {
  return alternating_optimize(vcfg, ch, beta, opts, PhaseVector::ones(vcfg->ris_elements), std::move(W0));
}

struct SchemeOutcome {
  Scheme scheme = Scheme::BS;
  SecrecyReport report;
  PhaseVector v;
  BeamformerSet W;
  int iterations = 0;
  int safeguard_events = 0;
};

/// Random starting point shared by every scheme for a given rng: phases from
/// substream 0, beamformer directions from substream 1, equal powers.
struct SchemeStart {
  PhaseVector v;
  BeamformerSet W;
};

inline SchemeStart scheme_start(const SystemConfig& cfg, const Rng& rng) {
  Rng rv = rng.substream(0);
  Rng rw = rng.substream(1);
  SchemeStart s{PhaseVector::random(cfg.ris_elements, rv),
                random_beamformers(cfg.users, cfg.antennas_per_user, cfg.total_power, rw)};
  return s;
}

inline SchemeOutcome run_scheme(Scheme scheme, const ValidatedConfig& vcfg, const ChannelSet& ch, double beta,
                                const SolverOptions& opts, const Rng& rng) {
  const SystemConfig& cfg = vcfg.get();
  SchemeStart start = scheme_start(cfg, rng);
  SchemeOutcome out;
  out.scheme = scheme;

  auto report_for = [&](const PhaseVector& v, const BeamformerSet& W) {
    const RealVector jam = jamming_for_state(ch, v, W, beta, cfg, opts.jamming_model).variance;
    return secrecy_report(ch, v, W, beta, jam, cfg);
  };

  switch (scheme) {
    case Scheme::BS: {
      out.v = std::move(start.v);
      out.W = std::move(start.W);
      out.report = report_for(out.v, out.W);
      return out;
    }
    case Scheme::RIS: {
      const SecrecyReport base = report_for(start.v, start.W);
      const RealVector jam = jamming_for_state(ch, start.v, start.W, beta, cfg, opts.jamming_model).variance;
      const PhaseProblem problem = build_phase_problem(ch, start.W, beta, cfg, jam);
      RcgResult r = rcg_optimize(problem, start.v, opts, cfg.epsilon, false);
      out.iterations = r.outer_iterations;
      out.safeguard_events = r.rejected_outer_step ? 1 : 0;
      SecrecyReport refined = report_for(r.v, start.W);
      out.W = std::move(start.W);
      if (refined.sum_rate >= base.sum_rate) {
        out.v = std::move(r.v);
        out.report = std::move(refined);
      } else {
        ++out.safeguard_events;
        out.v = std::move(start.v);
        out.report = base;
      }
      return out;
    }
    case Scheme::JOINT:
    case Scheme::AO: {
      AoFlags flags;
      flags.update_powers = scheme == Scheme::AO;
      AoResult r = alternating_optimize(vcfg, ch, beta, opts, start.v, std::move(start.W), flags);
      if (r.failure) throw *r.failure;
      out.v = std::move(r.v);
      out.W = std::move(r.W);
      out.report = std::move(r.report);
      out.iterations = r.iterations;
      out.safeguard_events = r.outer_rejections;
      return out;
    }
  }
  throw Error(ErrorCode::InvalidConfig, "unknown scheme");
}

/// CSV trace: iteration,sum_rate
inline void write_ao_trace_csv(std::ostream& out, const AoResult& r) {
  out << "iteration,sum_rate\n";
  out.precision(17);
  for (size_t i = 0; i < r.outer_trace.size(); ++i) out << i << ',' << r.outer_trace[i] << '\n';
}

}  // namespace rissec
