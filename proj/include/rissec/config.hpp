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
#include <string>
#include <vector>

namespace rissec {

/// System dimensions and physical constants.
///
/// The AP carries `tx_antennas = users * antennas_per_user` antennas split into
/// one contiguous block per user. Powers are linear (watts), variances linear.
struct SystemConfig {
  int users = 2;              // K
  int tx_antennas = 16;       // Nt
  int antennas_per_user = 8;  // nt
  int ris_elements = 16;      // M
  int eve_antennas = 3;       // Ne
  double total_power = 1.0;
  double noise_var_bob = 0.1;
  double noise_var_eve = 0.1;
  int qam_order = 4;
  double epsilon = 1e-2;  // AO convergence tolerance on the sum rate

  bool operator==(const SystemConfig&) const = default;
};

/// Large-scale fading. Direct mode takes relative gains in dB; distance mode
/// applies sqrt(L0 * d^-exponent) to the RIS->Bob and RIS->Eve links. The AP->RIS
/// link always uses `ap_ris_gain_db` (0 dB by default).
struct PathLossConfig {
  enum class Mode { DirectGain, Distance };

  Mode mode = Mode::DirectGain;
  double ap_ris_gain_db = 0.0;
  std::vector<double> bob_gain_db;  // empty: 0 dB for every user
  double eve_gain_db = 0.0;

  double reference_loss = 1.0;  // L0
  double exponent = 2.0;
  std::vector<double> bob_distance;
  double eve_distance = 1.0;

  bool operator==(const PathLossConfig&) const = default;
};

/// Free-space reference loss (lambda / 4 pi)^2.
inline double reference_loss_from_wavelength(double wavelength) {
  const double r = wavelength / (4.0 * M_PI);
  return r * r;
}

enum class JammingModel {
  Expected,    // E{J^H J} evaluated exactly for the current realization
  ClosedForm,  // closed form with a "+" cross term
};

struct SolverOptions {
  int ao_max_iterations = 50;    // T (outer alternating iterations)
  int rcg_outer_max = 30;        // SCA refreshes inside the phase solver
  int rcg_inner_max = 100;       // J
  int armijo_max_trials = 20;    // L
  double armijo_c = 1e-4;
  double armijo_contraction = 0.5;
  double armijo_initial_step = 1.0;
  double grad_tol = 1e-6;
  double water_tol = 1e-8;
  int beta_samples = 2000;
  std::uint64_t rng_seed = 1;
  JammingModel jamming_model = JammingModel::Expected;

  bool operator==(const SolverOptions&) const = default;
};

struct SimulationOptions {
  int symbols_per_trial = 100;
  int jobs = 0;  // 0: hardware concurrency
  bool eve_noise_tracks_bob = true;

  bool operator==(const SimulationOptions&) const = default;
};

/// A SystemConfig that passed validate_config. Only validate_config can make one.
class ValidatedConfig {
 public:
  const SystemConfig& get() const noexcept { return cfg_; }
  const SystemConfig* operator->() const noexcept { return &cfg_; }
  operator const SystemConfig&() const noexcept { return cfg_; }

  bool operator==(const ValidatedConfig&) const = default;

 private:
  explicit ValidatedConfig(SystemConfig cfg) : cfg_(std::move(cfg)) {}
  friend ValidatedConfig validate_config(const SystemConfig& cfg);

  SystemConfig cfg_;
};

inline bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

inline ValidatedConfig validate_config(const SystemConfig& cfg) {
  require(cfg.users >= 1, ErrorCode::NonPositive, "users must be >= 1");
  require(cfg.antennas_per_user >= 1, ErrorCode::NonPositive, "antennas_per_user must be >= 1");
  require(is_power_of_two(cfg.antennas_per_user), ErrorCode::NotPowerOfTwo,
          "antennas_per_user must be a power of two, got " + std::to_string(cfg.antennas_per_user));
  require(cfg.tx_antennas == cfg.users * cfg.antennas_per_user, ErrorCode::DimensionMismatch,
          "tx_antennas (" + std::to_string(cfg.tx_antennas) + ") != users * antennas_per_user (" +
              std::to_string(cfg.users * cfg.antennas_per_user) + ")");
  require(cfg.ris_elements >= 1, ErrorCode::NonPositive, "ris_elements must be >= 1");
  require(cfg.eve_antennas >= 1, ErrorCode::NonPositive, "eve_antennas must be >= 1");
  require(cfg.total_power > 0.0 && std::isfinite(cfg.total_power), ErrorCode::NonPositive,
          "total_power must be > 0");
  require(cfg.noise_var_bob > 0.0 && std::isfinite(cfg.noise_var_bob), ErrorCode::NonPositive,
          "noise_var_bob must be > 0");
  require(cfg.noise_var_eve > 0.0 && std::isfinite(cfg.noise_var_eve), ErrorCode::NonPositive,
          "noise_var_eve must be > 0");
  require(cfg.epsilon > 0.0, ErrorCode::NonPositive, "epsilon must be > 0");
  require(cfg.qam_order == 4 || cfg.qam_order == 16 || cfg.qam_order == 64, ErrorCode::BadOrder,
          "qam_order must be 4, 16 or 64");
  return ValidatedConfig(cfg);
}

inline ValidatedConfig validate_config(const ValidatedConfig& cfg) { return cfg; }

inline void validate_path_loss(const PathLossConfig& plc) {
  require(std::isfinite(plc.ap_ris_gain_db) && std::isfinite(plc.eve_gain_db), ErrorCode::InvalidConfig,
          "gains in dB must be finite");
  for (double g : plc.bob_gain_db)
    require(std::isfinite(g), ErrorCode::InvalidConfig, "gains in dB must be finite");
  if (plc.mode == PathLossConfig::Mode::Distance) {
    require(plc.reference_loss > 0.0, ErrorCode::NonPositive, "reference_loss must be > 0");
    require(plc.exponent > 0.0, ErrorCode::NonPositive, "path-loss exponent must be > 0");
    require(plc.eve_distance > 0.0, ErrorCode::NonPositive, "distances must be > 0");
    for (double d : plc.bob_distance) require(d > 0.0, ErrorCode::NonPositive, "distances must be > 0");
  }
}

inline void validate_solver(const SolverOptions& o) {
  require(o.ao_max_iterations >= 1 && o.rcg_outer_max >= 1 && o.rcg_inner_max >= 1 && o.armijo_max_trials >= 1,
          ErrorCode::InvalidConfig, "iteration caps must be >= 1");
  require(o.armijo_c > 0.0 && o.armijo_c < 1.0, ErrorCode::InvalidConfig, "armijo_c must be in (0,1)");
  require(o.armijo_contraction > 0.0 && o.armijo_contraction < 1.0, ErrorCode::InvalidConfig,
          "armijo_contraction must be in (0,1)");
  require(o.armijo_initial_step > 0.0, ErrorCode::InvalidConfig, "armijo_initial_step must be > 0");
  require(o.grad_tol > 0.0 && o.water_tol > 0.0, ErrorCode::InvalidConfig, "tolerances must be > 0");
  require(o.beta_samples >= 1, ErrorCode::InvalidConfig, "beta_samples must be >= 1");
}

/// SNR is Ptot / (K sigma_B^2) in dB. Eve's noise follows Bob's unless told otherwise.
inline double snr_db(const SystemConfig& cfg) {
  return 10.0 * std::log10(cfg.total_power / (cfg.users * cfg.noise_var_bob));
}

inline SystemConfig with_snr_db(SystemConfig cfg, double snr, bool eve_tracks_bob = true) {
  cfg.noise_var_bob = cfg.total_power / (cfg.users * std::pow(10.0, snr / 10.0));
  if (eve_tracks_bob) cfg.noise_var_eve = cfg.noise_var_bob;
  return cfg;
}

/// Changes the user count while keeping nt fixed (Nt = K nt).
inline SystemConfig with_users(SystemConfig cfg, int users) {
  cfg.users = users;
  cfg.tx_antennas = users * cfg.antennas_per_user;
  return cfg;
}

}  // namespace rissec
