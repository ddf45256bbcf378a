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

// Symbol-level simulation and multi-seed sweeps.
//
// Randomness layout for trial t (paired across schemes and grid points):
//   rng.substream(t, attempt)       channel draw; attempt > 0 after a singular draw
//   .substream(1)                   scheme starting point
//   .substream(2)                   symbols and noise

#pragma once

#include "rissec/ao.hpp"
#include "rissec/channel.hpp"
#include "rissec/config.hpp"
#include "rissec/config_io.hpp"
#include "rissec/precoder.hpp"
#include "rissec/qam.hpp"
#include "rissec/rng.hpp"
#include "rissec/types.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace rissec {

// ---- symbols -------------------------------------------------------------

struct SymbolVector {
  ComplexVector s;          // one constellation point per user
  std::vector<int> labels;  // Gray label per user
};

/// Maps K log2(order) bits (MSB first per user) onto points with E|s|^2 = 1/K.
inline SymbolVector qam_map(const std::vector<int>& bits, int order, int K) {
  require(K >= 1, ErrorCode::NonPositive, "K must be >= 1");
  const QamConstellation qam(order, 1.0 / K);
  const int b = qam.bits_per_symbol();
  require(static_cast<int>(bits.size()) == K * b, ErrorCode::DimensionMismatch,
          "bit count must be K * log2(order)");
  SymbolVector out;
  out.s.resize(K);
  for (int k = 0; k < K; ++k) {
    int label = 0;
    for (int i = 0; i < b; ++i) label = (label << 1) | (bits[static_cast<size_t>(k * b + i)] & 1);
    out.labels.push_back(label);
    out.s(k) = qam.point(label);
  }
  return out;
}

/// Hard decision back to bits (MSB first) for one received point.
inline std::vector<int> qam_demap(cdouble point, const QamConstellation& qam) {
  const int label = qam.nearest(point);
  std::vector<int> bits(static_cast<size_t>(qam.bits_per_symbol()));
  for (int i = 0; i < qam.bits_per_symbol(); ++i) bits[static_cast<size_t>(i)] = (label >> (qam.bits_per_symbol() - 1 - i)) & 1;
  return bits;
}

/// argmin_s |y - gain s|^2 over the constellation; ties go to the lowest label.
inline int detect_bob(cdouble y, cdouble gain, const QamConstellation& qam) {
  int best = 0;
  double best_d = std::norm(y - gain * qam.point(0));
  for (int i = 1; i < qam.order(); ++i) {
    const double d = std::norm(y - gain * qam.point(i));
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

/// argmin_s ||y - gain s||^2 over Eve's antennas.
inline int detect_eve(const ComplexVector& y, const ComplexVector& gain, const QamConstellation& qam) {
  require(y.size() == gain.size(), ErrorCode::DimensionMismatch, "Eve observation and gain lengths differ");
  int best = 0;
  double best_d = (y - gain * qam.point(0)).squaredNorm();
  for (int i = 1; i < qam.order(); ++i) {
    const double d = (y - gain * qam.point(i)).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

inline int bit_errors(int a, int b) { return std::popcount(static_cast<unsigned>(a ^ b)); }

// ---- worker pool ----------------------------------------------------------

inline int resolve_jobs(int jobs) {
  if (jobs > 0) return jobs;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Calls fn(i) for i in [0, n) on `jobs` threads. Callers write results into
/// slot i, so reduction order never depends on scheduling.
inline void parallel_for(int n, int jobs, const std::function<void(int)>& fn) {
  jobs = std::max(1, std::min(resolve_jobs(jobs), n));
  if (jobs == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int j = 0; j < jobs; ++j) {
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          next.store(n);
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

// ---- beta cache -----------------------------------------------------------

/// Memoizes beta per (system geometry, path loss, sample count, seed). Noise
/// levels do not enter the key.
class BetaCache {
 public:
  double get(const ValidatedConfig& vcfg, const PathLossConfig& plc, const SolverOptions& opts) {
    SystemConfig key_cfg = vcfg.get();
    key_cfg.noise_var_bob = 1.0;
    key_cfg.noise_var_eve = 1.0;
    key_cfg.epsilon = 1.0;
    nlohmann::json key{{"system", to_json(key_cfg)},
                       {"path_loss", to_json(plc)},
                       {"samples", opts.beta_samples},
                       {"seed", opts.rng_seed}};
    const std::string k = key.dump();
    {
      std::lock_guard<std::mutex> lock(mutex_);
      if (auto it = cache_.find(k); it != cache_.end()) return it->second;
    }
    const double beta = estimate_beta(vcfg, plc, opts, Rng(opts.rng_seed).substream(0xbe7a)).beta;
    std::lock_guard<std::mutex> lock(mutex_);
    cache_.emplace(k, beta);
    return beta;
  }

 private:
  std::mutex mutex_;
  std::map<std::string, double> cache_;
};

// ---- trials ---------------------------------------------------------------

struct TrialOutcome {
  std::vector<long> bob_bit_errors;
  std::vector<long> eve_bit_errors;
  long bits_per_user = 0;
  int resampled_singular = 0;
};

struct SchemeTrial {
  SchemeOutcome outcome;
  ChannelSet ch;
  Rng stream;
  int resampled = 0;
};

/// Channel draw plus optimizer run; a SingularSystem anywhere triggers a
/// fresh channel from the next attempt stream (at most 100 attempts).
inline SchemeTrial run_scheme_trial(Scheme scheme, const ValidatedConfig& vcfg, const PathLossConfig& plc,
                                    double beta, const SolverOptions& opts, const Rng& trial_rng) {
  for (int attempt = 0;; ++attempt) {
    Rng stream = attempt == 0 ? trial_rng : trial_rng.substream(0x5eed, static_cast<std::uint64_t>(attempt));
    Rng channel_rng = stream.substream(0);
    ChannelSet ch = generate_channel_set(vcfg, plc, channel_rng);
    try {
      SchemeOutcome out = run_scheme(scheme, vcfg, ch, beta, opts, stream.substream(1));
      return {std::move(out), std::move(ch), stream, attempt};
    } catch (const Error& e) {
      if (e.code() != ErrorCode::SingularSystem || attempt >= 100) throw;
    }
  }
}

/// Full: Bob sees beta hB_k^H Theta G x + n_B through the whole multi-user
/// channel. Reduced: Bob sees only beta sqrt(P_k) hB_k^H Theta G_k w_k s_k + n_B.
enum class BobModel { Full, Reduced };

/// Transmits `nsym` symbol vectors with fresh symbols, precoder and noise.
/// Eve always sees beta H_E Theta G x + n_E.
inline TrialOutcome simulate_symbols(const ChannelSet& ch, const SchemeOutcome& st, double beta,
                                     const SystemConfig& cfg, int nsym, Rng& rng, BobModel model = BobModel::Full) {
  const int K = ch.users();
  const QamConstellation qam(cfg.qam_order, 1.0 / K);
  const ComplexMatrix H = interference_channel(ch, st.v, st.W.w);
  // Per-user images at Eve: E_u = H_E Theta G_u w_u (Ne x K).
  const ComplexMatrix Eimg = ch.HE * (st.v.values().asDiagonal() * transmit_footprints(ch, st.W.w));
  const double sb = std::sqrt(cfg.noise_var_bob);
  const double se = std::sqrt(cfg.noise_var_eve);

  TrialOutcome out;
  out.bob_bit_errors.assign(static_cast<size_t>(K), 0);
  out.eve_bit_errors.assign(static_cast<size_t>(K), 0);
  out.bits_per_user = static_cast<long>(nsym) * qam.bits_per_symbol();

  std::vector<int> labels(static_cast<size_t>(K));
  ComplexVector s(K);
  for (int n = 0; n < nsym; ++n) {
    for (int k = 0; k < K; ++k) {
      labels[static_cast<size_t>(k)] = qam.random_label(rng);
      s(k) = qam.point(labels[static_cast<size_t>(k)]);
    }
    const ComplexVector z = precoded_streams(H, st.W.powers, s);
    const ComplexVector bob_clean = beta * (H * z);
    const ComplexVector eve_clean = beta * (Eimg * z);
    for (int k = 0; k < K; ++k) {
      const double amp = beta * std::sqrt(st.W.powers(k));
      const cdouble clean = model == BobModel::Full ? bob_clean(k) : amp * H(k, k) * s(k);
      const cdouble yb = clean + sb * rng.complex_normal();
      const int kb = detect_bob(yb, amp * H(k, k), qam);
      out.bob_bit_errors[static_cast<size_t>(k)] += bit_errors(kb, labels[static_cast<size_t>(k)]);

      ComplexVector ye = eve_clean;
      for (Eigen::Index e = 0; e < ye.size(); ++e) ye(e) += se * rng.complex_normal();
      const int ke = detect_eve(ye, amp * Eimg.col(k), qam);
      out.eve_bit_errors[static_cast<size_t>(k)] += bit_errors(ke, labels[static_cast<size_t>(k)]);
    }
  }
  return out;
}

// ---- sweeps ---------------------------------------------------------------

enum class SweepAxis { Snr, RisElements, Users };

inline const char* to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::Snr: return "snr";
    case SweepAxis::RisElements: return "m";
    case SweepAxis::Users: return "k";
  }
  return "?";
}

inline SweepAxis parse_axis(const std::string& s) {
  std::string l;
  for (char c : s) l.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (l == "snr") return SweepAxis::Snr;
  if (l == "m") return SweepAxis::RisElements;
  if (l == "k") return SweepAxis::Users;
  throw Error(ErrorCode::InvalidConfig, "unknown axis '" + s + "' (snr, m, k)");
}

/// Config at one grid point. SNR is Ptot / (K sigmaB^2) in dB.
inline SystemConfig config_at(const ExperimentConfig& base, SweepAxis axis, double value) {
  SystemConfig c = base.system;
  switch (axis) {
    case SweepAxis::Snr:
      c = with_snr_db(c, value, base.simulation.eve_noise_tracks_bob);
      break;
    case SweepAxis::RisElements:
      c.ris_elements = static_cast<int>(std::lround(value));
      break;
    case SweepAxis::Users:
      c = with_users(c, static_cast<int>(std::lround(value)));
      break;
  }
  return c;
}

/// Path loss with per-user Bob gains padded (with the last entry) or trimmed to K.
inline PathLossConfig path_loss_for(const PathLossConfig& plc, int K) {
  PathLossConfig p = plc;
  if (!p.bob_gain_db.empty()) {
    const double last = p.bob_gain_db.back();
    p.bob_gain_db.resize(static_cast<size_t>(K), last);
  }
  return p;
}

struct SummaryRow {
  std::string scheme;
  double axis_value = 0.0;
  std::string user;  // "all" for sums
  std::string metric;
  double mean = 0.0;
  double stderr_value = 0.0;
  long trials = 0;
};

inline void mean_and_stderr(const std::vector<double>& xs, double& mean, double& se) {
  const double n = static_cast<double>(xs.size());
  mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  se = xs.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
}

struct SecrecySweep {
  std::vector<Scheme> schemes;
  std::vector<double> grid;
  int seeds = 0;
  // rate[g][scheme][seed]
  std::vector<std::vector<std::vector<double>>> rate;
  int resampled_singular = 0;
  int safeguard_events = 0;

  std::vector<SummaryRow> summary() const {
    std::vector<SummaryRow> rows;
    for (size_t g = 0; g < grid.size(); ++g)
      for (size_t s = 0; s < schemes.size(); ++s) {
        SummaryRow r{to_string(schemes[s]), grid[g], "all", "secrecy_sum_rate", 0.0, 0.0, seeds};
        mean_and_stderr(rate[g][s], r.mean, r.stderr_value);
        rows.push_back(r);
      }
    return rows;
  }
};

/// Mean secrecy sum rate per (grid point, scheme). Seed i at every grid point
/// uses rng.substream(i), and every scheme sees the same channel.
inline SecrecySweep run_secrecy_sweep(const ExperimentConfig& base, const std::vector<Scheme>& schemes,
                                      SweepAxis axis, const std::vector<double>& grid, int seeds, const Rng& rng,
                                      int jobs, BetaCache* cache = nullptr) {
  require(!grid.empty(), ErrorCode::InvalidConfig, "grid must be nonempty");
  require(!schemes.empty(), ErrorCode::InvalidConfig, "scheme list must be nonempty");
  require(seeds >= 1, ErrorCode::InvalidConfig, "seeds must be >= 1");
  BetaCache local;
  BetaCache& betas = cache ? *cache : local;

  std::vector<ValidatedConfig> cfgs;
  std::vector<PathLossConfig> plcs;
  std::vector<double> beta;
  for (double g : grid) {
    cfgs.push_back(validate_config(config_at(base, axis, g)));
    plcs.push_back(path_loss_for(base.path_loss, cfgs.back()->users));
    validate_path_loss(plcs.back());
    beta.push_back(betas.get(cfgs.back(), plcs.back(), base.solver));
  }

  SecrecySweep out;
  out.schemes = schemes;
  out.grid = grid;
  out.seeds = seeds;
  out.rate.assign(grid.size(), std::vector<std::vector<double>>(schemes.size(), std::vector<double>(seeds, 0.0)));
  std::vector<int> resampled(grid.size() * seeds, 0);
  std::vector<int> guards(grid.size() * seeds, 0);

  const int tasks = static_cast<int>(grid.size()) * seeds;
  parallel_for(tasks, jobs, [&](int task) {
    const size_t g = static_cast<size_t>(task / seeds);
    const int seed = task % seeds;
    const Rng trial = rng.substream(static_cast<std::uint64_t>(seed));
    for (size_t s = 0; s < schemes.size(); ++s) {
      SchemeTrial r = run_scheme_trial(schemes[s], cfgs[g], plcs[g], beta[g], base.solver, trial);
      out.rate[g][s][static_cast<size_t>(seed)] = r.outcome.report.sum_rate;
      resampled[static_cast<size_t>(task)] = std::max(resampled[static_cast<size_t>(task)], r.resampled);
      guards[static_cast<size_t>(task)] += r.outcome.safeguard_events;
    }
  });
  for (int r : resampled) out.resampled_singular += r;
  for (int r : guards) out.safeguard_events += r;
  return out;
}

struct BerSweep {
  Scheme scheme = Scheme::BS;
  std::vector<double> snr_grid;
  int trials = 0;
  int users = 0;
  // per-trial BER, [g][user][trial]
  std::vector<std::vector<std::vector<double>>> bob;
  std::vector<std::vector<std::vector<double>>> eve;
  int resampled_singular = 0;

  double mean_bob(size_t g, int k) const {
    double m, se;
    mean_and_stderr(bob[g][static_cast<size_t>(k)], m, se);
    return m;
  }
  double mean_eve(size_t g, int k) const {
    double m, se;
    mean_and_stderr(eve[g][static_cast<size_t>(k)], m, se);
    return m;
  }

  std::vector<SummaryRow> summary() const {
    std::vector<SummaryRow> rows;
    for (size_t g = 0; g < snr_grid.size(); ++g)
      for (int k = 0; k < users; ++k)
        for (int who = 0; who < 2; ++who) {
          SummaryRow r{to_string(scheme), snr_grid[g], std::to_string(k + 1), who == 0 ? "bob_ber" : "eve_ber",
                       0.0, 0.0, trials};
          mean_and_stderr((who == 0 ? bob : eve)[g][static_cast<size_t>(k)], r.mean, r.stderr_value);
          rows.push_back(r);
        }
    return rows;
  }
};

/// Per (SNR, user) Bob and Eve BER. Each trial draws channels, runs the
/// scheme and sends `symbols_per_trial` symbol vectors. Trial t uses
/// rng.substream(t) at every SNR point.
inline BerSweep run_ber_sweep(const ExperimentConfig& base, Scheme scheme, const std::vector<double>& snr_grid,
                              int trials, const Rng& rng, int jobs, BetaCache* cache = nullptr) {
  require(trials >= 1, ErrorCode::InvalidConfig, "trials must be >= 1");
  require(!snr_grid.empty(), ErrorCode::InvalidConfig, "SNR grid must be nonempty");
  require(base.simulation.symbols_per_trial >= 1, ErrorCode::InvalidConfig, "symbols_per_trial must be >= 1");
  BetaCache local;
  BetaCache& betas = cache ? *cache : local;

  std::vector<ValidatedConfig> cfgs;
  const PathLossConfig plc = path_loss_for(base.path_loss, base.system.users);
  validate_path_loss(plc);
  std::vector<double> beta;
  for (double snr : snr_grid) {
    cfgs.push_back(validate_config(config_at(base, SweepAxis::Snr, snr)));
    beta.push_back(betas.get(cfgs.back(), plc, base.solver));
  }
  const int K = base.system.users;

  BerSweep out;
  out.scheme = scheme;
  out.snr_grid = snr_grid;
  out.trials = trials;
  out.users = K;
  out.bob.assign(snr_grid.size(), std::vector<std::vector<double>>(static_cast<size_t>(K), std::vector<double>(trials)));
  out.eve = out.bob;
  std::vector<int> resampled(snr_grid.size() * trials, 0);

  const int tasks = static_cast<int>(snr_grid.size()) * trials;
  parallel_for(tasks, jobs, [&](int task) {
    const size_t g = static_cast<size_t>(task / trials);
    const int t = task % trials;
    SchemeTrial r = run_scheme_trial(scheme, cfgs[g], plc, beta[g], base.solver, rng.substream(static_cast<std::uint64_t>(t)));
    Rng sym = r.stream.substream(2);
    const TrialOutcome o = simulate_symbols(r.ch, r.outcome, beta[g], cfgs[g].get(), base.simulation.symbols_per_trial, sym);
    for (int k = 0; k < K; ++k) {
      out.bob[g][static_cast<size_t>(k)][static_cast<size_t>(t)] =
          static_cast<double>(o.bob_bit_errors[static_cast<size_t>(k)]) / static_cast<double>(o.bits_per_user);
      out.eve[g][static_cast<size_t>(k)][static_cast<size_t>(t)] =
          static_cast<double>(o.eve_bit_errors[static_cast<size_t>(k)]) / static_cast<double>(o.bits_per_user);
    }
    resampled[static_cast<size_t>(task)] = r.resampled;
  });
  for (int r : resampled) out.resampled_singular += r;
  return out;
}

}  // namespace rissec
