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

// Interference-cancelling precoder.
//
// For fixed phases, beamformers, powers and symbols the received signal of
// user k is sum_u Q(k,u) varpi(u) with Q(k,u) = sqrt(P_u) hB_k^H Theta G_u w_u s_u.
// Solving Q varpi = diag(Q) leaves only the desired term at every user. The
// transmit vector is then scaled by a constant beta so that the long-run power
// stays at Ptot; beta is estimated once per configuration by Monte Carlo.
//
// The leakage of the other users' streams at Eve acts as jamming. Its
// variance is available three ways: a closed form in either sign, the exact
// expectation over (H_E, G) for the current realization, and a Monte Carlo
// estimate used as the reference.

#pragma once

#include "rissec/channel.hpp"
#include "rissec/config.hpp"
#include "rissec/qam.hpp"
#include "rissec/rng.hpp"
#include "rissec/state.hpp"
#include "rissec/types.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <vector>

namespace rissec {

inline constexpr double kMaxConditionNumber = 1e12;

struct InterferenceSystem {
  ComplexMatrix Q;  // K x K
  ComplexVector q;  // diag(Q)
};

struct PrecoderResult {
  ComplexMatrix Q;
  ComplexVector q;
  ComplexVector varpi;
  double condition_number = 0.0;
};

struct BetaEstimate {
  double beta = 1.0;
  int sample_count = 0;
  double standard_error = 0.0;
  int resampled = 0;
};

enum class JammingSource { ClosedForm, Expected, Empirical };

struct JammingStats {
  RealVector variance;
  JammingSource source = JammingSource::Expected;
};

inline double condition_number(const ComplexMatrix& A) {
  Eigen::JacobiSVD<ComplexMatrix> svd(A);
  const auto& s = svd.singularValues();
  if (s.size() == 0) return 0.0;
  const double smin = s(s.size() - 1);
  if (!(smin > 0.0)) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

inline InterferenceSystem build_interference_system(const ChannelSet& ch, const PhaseVector& v,
                                                    const BeamformerSet& W, const ComplexVector& s) {
  check_dimensions(ch, v, W);
  require(s.size() == ch.users(), ErrorCode::DimensionMismatch, "symbol vector length != K");
  const ComplexMatrix H = interference_channel(ch, v, W.w);
  InterferenceSystem sys;
  sys.Q.resize(H.rows(), H.cols());
  for (Eigen::Index u = 0; u < H.cols(); ++u) sys.Q.col(u) = H.col(u) * (std::sqrt(W.powers(u)) * s(u));
  sys.q = sys.Q.diagonal();
  return sys;
}

/// Solves Q varpi = q. Throws SingularSystem past a condition number of 1e12.
inline ComplexVector solve_precoder(const ComplexMatrix& Q, const ComplexVector& q,
                                    double* condition_out = nullptr) {
  require(Q.rows() == Q.cols(), ErrorCode::DimensionMismatch, "Q must be square");
  require(q.size() == Q.rows(), ErrorCode::DimensionMismatch, "q length != rows of Q");
  const double cond = condition_number(Q);
  if (condition_out) *condition_out = cond;
  if (!(cond <= kMaxConditionNumber))
    throw Error(ErrorCode::SingularSystem, "interference matrix condition number " + std::to_string(cond));
  Eigen::PartialPivLU<ComplexMatrix> lu(Q);
  ComplexVector x = lu.solve(q);
  x += lu.solve(ComplexVector(q - Q * x));  // one refinement step
  return x;
}

inline PrecoderResult precode(const ChannelSet& ch, const PhaseVector& v, const BeamformerSet& W,
                              const ComplexVector& s) {
  InterferenceSystem sys = build_interference_system(ch, v, W, s);
  PrecoderResult r;
  r.varpi = solve_precoder(sys.Q, sys.q, &r.condition_number);
  r.Q = std::move(sys.Q);
  r.q = std::move(sys.q);
  return r;
}

/// Per-user transmit block x_u = sqrt(P_u) w_u varpi(u) s_u, stacked to length Nt.
inline ComplexVector transmit_vector(const BeamformerSet& W, const ComplexVector& varpi, const ComplexVector& s) {
  const int K = W.users();
  const Eigen::Index nt = W.w.front().size();
  ComplexVector x(K * nt);
  for (int u = 0; u < K; ++u)
    x.segment(u * nt, nt) = W.w[static_cast<size_t>(u)] * (std::sqrt(W.powers(u)) * varpi(u) * s(u));
  return x;
}

/// Largest deviation of the received noiseless signal from its
/// interference-free form: max_k |hB_k^H Theta G x - sqrt(P_k) hB_k^H Theta G_k w_k s_k|,
/// with x built from `varpi`. Evaluated on the channel matrices, not on Q.
inline double interference_residual(const ChannelSet& ch, const PhaseVector& v, const BeamformerSet& W,
                                    const ComplexVector& s, const ComplexVector& varpi) {
  check_dimensions(ch, v, W);
  const ComplexVector x = transmit_vector(W, varpi, s);
  const ComplexVector at_ris = v.values().cwiseProduct(ch.G * x);
  double worst = 0.0;
  for (int k = 0; k < ch.users(); ++k) {
    const auto& h = ch.hB[static_cast<size_t>(k)];
    const ComplexVector ref = v.values().cwiseProduct(
        ch.G_block(k) * (W.w[static_cast<size_t>(k)] * (std::sqrt(W.powers(k)) * s(k))));
    worst = std::max(worst, std::abs(h.dot(at_ris) - h.dot(ref)));
  }
  return worst;
}

/// max_k |sum_{u != k} hB_k^H Theta G_u x_u|: the cross-user part of the
/// received signal alone. Equals |q_k (1 - varpi(k))| for the solved precoder.
inline double cross_user_leakage(const ChannelSet& ch, const PhaseVector& v, const BeamformerSet& W,
                                 const ComplexVector& s, const ComplexVector& varpi) {
  check_dimensions(ch, v, W);
  const ComplexVector x = transmit_vector(W, varpi, s);
  const Eigen::Index nt = ch.antennas_per_user;
  double worst = 0.0;
  for (int k = 0; k < ch.users(); ++k) {
    cdouble leak = 0.0;
    for (int u = 0; u < ch.users(); ++u) {
      if (u == k) continue;
      const ComplexVector at_ris = ch.G_block(u) * x.segment(u * nt, nt);
      leak += ch.hB[static_cast<size_t>(k)].dot(v.values().cwiseProduct(at_ris));
    }
    worst = std::max(worst, std::abs(leak));
  }
  return worst;
}

/// Precoded streams z_u = sqrt(P_u) varpi(u) s_u from H z = diag(H) sqrt(P) s.
/// Same signal as solving Q varpi = q, but still defined when some P_u = 0
/// (that user's stream then only carries cancellation for the others).
inline ComplexVector precoded_streams(const ComplexMatrix& H, const RealVector& powers, const ComplexVector& s) {
  require(H.rows() == H.cols() && powers.size() == H.rows() && s.size() == H.rows(), ErrorCode::DimensionMismatch,
          "precoded_streams dimension mismatch");
  ComplexVector c(H.rows());
  for (Eigen::Index j = 0; j < H.rows(); ++j) c(j) = H(j, j) * std::sqrt(powers(j)) * s(j);
  return solve_precoder(H, c);
}

/// Symbol-averaged precoder E_s{varpi(k)} = H(k,k) [H^-1](k,k): the cross
/// terms vanish for independent zero-mean symbols.
inline ComplexVector mean_precoder(const ComplexMatrix& H) {
  const double cond = condition_number(H);
  if (!(cond <= kMaxConditionNumber))
    throw Error(ErrorCode::SingularSystem, "cascaded channel condition number " + std::to_string(cond));
  const ComplexMatrix Hinv = H.partialPivLu().inverse();
  return H.diagonal().cwiseProduct(Hinv.diagonal());
}

/// beta = E{ sqrt(K / Tr(varpi varpi^H)) } over random channels, unit-modulus
/// phases, unit-norm beamformers, equal powers and uniform constellation
/// symbols. Draw i uses rng.substream(i); singular draws are redrawn from a
/// child stream and counted.
inline BetaEstimate estimate_beta(const ValidatedConfig& vcfg, const PathLossConfig& plc, const SolverOptions& opts,
                                  const Rng& rng) {
  const SystemConfig& cfg = vcfg.get();
  require(opts.beta_samples >= 100, ErrorCode::InvalidConfig, "beta estimation needs >= 100 samples");
  BetaEstimate est;
  est.sample_count = opts.beta_samples;
  if (cfg.users == 1) {
    // varpi == 1 identically for a single user.
    est.beta = 1.0;
    return est;
  }
  const QamConstellation qam(cfg.qam_order, 1.0 / cfg.users);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < opts.beta_samples; ++i) {
    for (int attempt = 0;; ++attempt) {
      Rng draw = attempt == 0 ? rng.substream(static_cast<std::uint64_t>(i))
                              : rng.substream(static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(attempt));
      const ChannelSet ch = generate_channel_set(vcfg, plc, draw);
      const PhaseVector v = PhaseVector::random(cfg.ris_elements, draw);
      const BeamformerSet W = random_beamformers(cfg.users, cfg.antennas_per_user, cfg.total_power, draw);
      ComplexVector s(cfg.users);
      for (int k = 0; k < cfg.users; ++k) s(k) = qam.point(qam.random_label(draw));
      try {
        const PrecoderResult pr = precode(ch, v, W, s);
        const double value = std::sqrt(cfg.users / pr.varpi.squaredNorm());
        sum += value;
        sum_sq += value * value;
        break;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::SingularSystem || attempt > 100) throw;
        ++est.resampled;
      }
    }
  }
  const double n = opts.beta_samples;
  est.beta = sum / n;
  const double var = std::max(0.0, (sum_sq - n * est.beta * est.beta) / (n - 1.0));
  est.standard_error = std::sqrt(var / n);
  return est;
}

enum class CrossTermSign { Plus, Minus };

/// M Ne beta^2 (Ptot (beta^-2 + 1/K) +/- 2 Re{varpi(k)}). Expanding
/// E||a - b||^2 gives the "-" sign.
inline double jamming_variance_closed_form(const SystemConfig& cfg, double beta, double varpi_k_real,
                                           CrossTermSign sign = CrossTermSign::Plus) {
  require(beta > 0.0, ErrorCode::NonPositive, "beta must be > 0");
  const double cross = (sign == CrossTermSign::Plus ? 2.0 : -2.0) * varpi_k_real;
  return cfg.ris_elements * cfg.eve_antennas * beta * beta *
         (cfg.total_power * (1.0 / (beta * beta) + 1.0 / cfg.users) + cross);
}

/// Transmit vector minus user k's un-precoded reference sqrt(P_k) w_k s_k, so
/// that G times it is the argument of the jamming term at Eve.
inline ComplexVector jamming_source(const BeamformerSet& W, const ComplexVector& varpi, const ComplexVector& s, int k) {
  ComplexVector x = transmit_vector(W, varpi, s);
  const Eigen::Index nt = W.w.front().size();
  x.segment(k * nt, nt) -= W.w[static_cast<size_t>(k)] * (std::sqrt(W.powers(k)) * s(k));
  return x;
}

/// E_{H_E,G}{ ||J_k||^2 } for fixed symbols and precoder:
/// beta^2 Ne M g_E^2 g_G^2 ||x - sqrt(P_k) e_k (x) w_k s_k||^2.
inline double jamming_variance_conditional(const ChannelSet& ch, const BeamformerSet& W, const ComplexVector& varpi,
                                           const ComplexVector& s, double beta, int k) {
  const ComplexVector x = jamming_source(W, varpi, s, k);
  const double gains = ch.amp_eve * ch.amp_eve * ch.amp_ap_ris * ch.amp_ap_ris;
  return beta * beta * ch.eve_antennas() * ch.ris_elements() * gains * x.squaredNorm();
}

/// Exact jamming variance for the current realization, additionally averaged
/// over independent zero-mean symbols with E|s|^2 = 1/K:
///   beta^2 Ne M g_E^2 g_G^2 [ (1/K) sum_{u,j} |Hinv(u,j)|^2 |H(j,j)|^2 P_j
///                             + P_k/K - 2 (P_k/K) Re{H(k,k) Hinv(k,k)} ].
inline RealVector jamming_variance_expected(const ChannelSet& ch, const PhaseVector& v, const BeamformerSet& W,
                                            double beta) {
  check_dimensions(ch, v, W);
  const int K = ch.users();
  const ComplexMatrix H = interference_channel(ch, v, W.w);
  const double cond = condition_number(H);
  if (!(cond <= kMaxConditionNumber))
    throw Error(ErrorCode::SingularSystem, "cascaded channel condition number " + std::to_string(cond));
  const ComplexMatrix Hinv = H.partialPivLu().inverse();

  double total = 0.0;
  for (int u = 0; u < K; ++u)
    for (int j = 0; j < K; ++j) total += std::norm(Hinv(u, j)) * std::norm(H(j, j)) * W.powers(j);
  total /= K;

  const double scale = beta * beta * ch.eve_antennas() * ch.ris_elements() * ch.amp_eve * ch.amp_eve *
                       ch.amp_ap_ris * ch.amp_ap_ris;
  RealVector out(K);
  for (int k = 0; k < K; ++k) {
    const double pk = W.powers(k) / K;
    const double cross = (H(k, k) * Hinv(k, k)).real();
    out(k) = scale * std::max(0.0, total + pk - 2.0 * pk * cross);
  }
  return out;
}

/// Jamming variances used by the rate expressions for the current state.
inline JammingStats jamming_for_state(const ChannelSet& ch, const PhaseVector& v, const BeamformerSet& W, double beta,
                                      const SystemConfig& cfg, JammingModel model) {
  JammingStats stats;
  if (model == JammingModel::Expected) {
    stats.variance = jamming_variance_expected(ch, v, W, beta);
    stats.source = JammingSource::Expected;
    return stats;
  }
  const ComplexVector mean = mean_precoder(interference_channel(ch, v, W.w));
  stats.variance.resize(ch.users());
  for (int k = 0; k < ch.users(); ++k)
    stats.variance(k) = jamming_variance_closed_form(cfg, beta, mean(k).real(), CrossTermSign::Plus);
  stats.source = JammingSource::ClosedForm;
  return stats;
}

struct MonteCarloEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  int samples = 0;
};

namespace detail {

struct RunningMoments {
  double sum = 0.0;
  double sum_sq = 0.0;
  int n = 0;

  void add(double x) {
    sum += x;
    sum_sq += x * x;
    ++n;
  }

  MonteCarloEstimate estimate() const {
    MonteCarloEstimate e;
    e.samples = n;
    e.mean = n > 0 ? sum / n : 0.0;
    if (n > 1) e.standard_error = std::sqrt(std::max(0.0, (sum_sq - n * e.mean * e.mean) / (n - 1.0)) / n);
    return e;
  }
};

}  // namespace detail

/// Monte Carlo of E{ ||beta H_E Theta (G x - G_k x_k)||^2 } over fresh CN(0,1)
/// draws of H_E and G; the precoder, symbols, powers and beamformers stay fixed.
inline MonteCarloEstimate jamming_variance_empirical(const SystemConfig& cfg, const PhaseVector& v,
                                                     const BeamformerSet& W, const ComplexVector& varpi,
                                                     const ComplexVector& s, double beta, int k, int samples,
                                                     Rng& rng) {
  require(samples >= 1000, ErrorCode::InvalidConfig, "empirical jamming variance needs >= 1000 samples");
  require(W.w.front().size() == cfg.antennas_per_user, ErrorCode::DimensionMismatch, "beamformer length != nt");
  const ComplexVector x = jamming_source(W, varpi, s, k);
  detail::RunningMoments acc;
  for (int i = 0; i < samples; ++i) {
    const ComplexMatrix G = sample_rayleigh(cfg.ris_elements, cfg.tx_antennas, rng);
    const ComplexMatrix HE = sample_rayleigh(cfg.eve_antennas, cfg.ris_elements, rng);
    const ComplexVector at_ris = v.values().cwiseProduct(G * x);
    acc.add((beta * (HE * at_ris)).squaredNorm());
  }
  return acc.estimate();
}

/// Per-term Monte Carlo over G of ||a||^2, ||b||^2 and b^H a, with
/// a = G x (all users) and b = sqrt(P_k) G_k w_k s_k.
struct ExpansionTerms {
  MonteCarloEstimate a_sq;
  MonteCarloEstimate b_sq;
  MonteCarloEstimate ba_real;
  MonteCarloEstimate ba_imag;
};

inline ExpansionTerms expansion_term_estimates(const SystemConfig& cfg, const BeamformerSet& W,
                                               const ComplexVector& varpi, const ComplexVector& s, int k, int samples,
                                               Rng& rng) {
  const ComplexVector x = transmit_vector(W, varpi, s);
  const Eigen::Index nt = cfg.antennas_per_user;
  detail::RunningMoments a2, b2, bar, bai;
  for (int i = 0; i < samples; ++i) {
    const ComplexMatrix G = sample_rayleigh(cfg.ris_elements, cfg.tx_antennas, rng);
    const ComplexVector a = G * x;
    const ComplexVector b = G.middleCols(k * nt, nt) * (W.w[static_cast<size_t>(k)] * (std::sqrt(W.powers(k)) * s(k)));
    const cdouble ba = b.dot(a);  // b^H a
    a2.add(a.squaredNorm());
    b2.add(b.squaredNorm());
    bar.add(ba.real());
    bai.add(ba.imag());
  }
  return {a2.estimate(), b2.estimate(), bar.estimate(), bai.estimate()};
}

}  // namespace rissec
