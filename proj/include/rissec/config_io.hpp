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

// JSON ingestion of experiment configs. Every field has a stable snake_case
// key; unknown keys are rejected.

#pragma once

#include "rissec/config.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>
#include <string>

namespace rissec {

struct ExperimentConfig {
  SystemConfig system;
  PathLossConfig path_loss;
  SolverOptions solver;
  SimulationOptions simulation;

  bool operator==(const ExperimentConfig&) const = default;
};

namespace detail {

using nlohmann::json;

inline void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& section) {
  require(j.is_object(), ErrorCode::InvalidConfig, "section '" + section + "' must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key))
      throw Error(ErrorCode::InvalidConfig, "unknown key '" + key + "' in section '" + section + "'");
  }
}

template <typename T>
void read_if(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("bad value for '") + key + "': " + e.what());
  }
}

}  // namespace detail

inline nlohmann::json to_json(const SystemConfig& c) {
  return {{"users", c.users},
          {"tx_antennas", c.tx_antennas},
          {"antennas_per_user", c.antennas_per_user},
          {"ris_elements", c.ris_elements},
          {"eve_antennas", c.eve_antennas},
          {"total_power", c.total_power},
          {"noise_var_bob", c.noise_var_bob},
          {"noise_var_eve", c.noise_var_eve},
          {"qam_order", c.qam_order},
          {"epsilon", c.epsilon}};
}

inline nlohmann::json to_json(const PathLossConfig& p) {
  return {{"mode", p.mode == PathLossConfig::Mode::DirectGain ? "direct" : "distance"},
          {"ap_ris_gain_db", p.ap_ris_gain_db},
          {"bob_gain_db", p.bob_gain_db},
          {"eve_gain_db", p.eve_gain_db},
          {"reference_loss", p.reference_loss},
          {"exponent", p.exponent},
          {"bob_distance", p.bob_distance},
          {"eve_distance", p.eve_distance}};
}

inline nlohmann::json to_json(const SolverOptions& o) {
  return {{"ao_max_iterations", o.ao_max_iterations},
          {"rcg_outer_max", o.rcg_outer_max},
          {"rcg_inner_max", o.rcg_inner_max},
          {"armijo_max_trials", o.armijo_max_trials},
          {"armijo_c", o.armijo_c},
          {"armijo_contraction", o.armijo_contraction},
          {"armijo_initial_step", o.armijo_initial_step},
          {"grad_tol", o.grad_tol},
          {"water_tol", o.water_tol},
          {"beta_samples", o.beta_samples},
          {"rng_seed", o.rng_seed},
          {"jamming_model", o.jamming_model == JammingModel::Expected ? "expected" : "closed_form"}};
}

inline nlohmann::json to_json(const SimulationOptions& s) {
  return {{"symbols_per_trial", s.symbols_per_trial},
          {"jobs", s.jobs},
          {"eve_noise_tracks_bob", s.eve_noise_tracks_bob}};
}

inline nlohmann::json to_json(const ExperimentConfig& e) {
  return {{"system", to_json(e.system)},
          {"path_loss", to_json(e.path_loss)},
          {"solver", to_json(e.solver)},
          {"simulation", to_json(e.simulation)}};
}

inline ExperimentConfig experiment_from_json(const nlohmann::json& j) {
  using detail::read_if;
  ExperimentConfig e;
  detail::reject_unknown(j, {"system", "path_loss", "solver", "simulation"}, "<root>");

  if (j.contains("system")) {
    const auto& s = j.at("system");
    detail::reject_unknown(s,
                           {"users", "tx_antennas", "antennas_per_user", "ris_elements", "eve_antennas",
                            "total_power", "noise_var_bob", "noise_var_eve", "qam_order", "epsilon"},
                           "system");
    auto& c = e.system;
    read_if(s, "users", c.users);
    read_if(s, "tx_antennas", c.tx_antennas);
    read_if(s, "antennas_per_user", c.antennas_per_user);
    read_if(s, "ris_elements", c.ris_elements);
    read_if(s, "eve_antennas", c.eve_antennas);
    read_if(s, "total_power", c.total_power);
    read_if(s, "noise_var_bob", c.noise_var_bob);
    read_if(s, "noise_var_eve", c.noise_var_eve);
    read_if(s, "qam_order", c.qam_order);
    read_if(s, "epsilon", c.epsilon);
  }

  if (j.contains("path_loss")) {
    const auto& p = j.at("path_loss");
    detail::reject_unknown(p,
                           {"mode", "ap_ris_gain_db", "bob_gain_db", "eve_gain_db", "reference_loss", "wavelength",
                            "exponent", "bob_distance", "eve_distance"},
                           "path_loss");
    auto& c = e.path_loss;
    std::string mode = "direct";
    read_if(p, "mode", mode);
    if (mode == "direct") {
      c.mode = PathLossConfig::Mode::DirectGain;
    } else if (mode == "distance") {
      c.mode = PathLossConfig::Mode::Distance;
    } else {
      throw Error(ErrorCode::InvalidConfig, "path_loss.mode must be 'direct' or 'distance'");
    }
    read_if(p, "ap_ris_gain_db", c.ap_ris_gain_db);
    read_if(p, "bob_gain_db", c.bob_gain_db);
    read_if(p, "eve_gain_db", c.eve_gain_db);
    read_if(p, "reference_loss", c.reference_loss);
    if (p.contains("wavelength")) {
      double wavelength = 0.0;
      read_if(p, "wavelength", wavelength);
      require(wavelength > 0.0, ErrorCode::NonPositive, "wavelength must be > 0");
      c.reference_loss = reference_loss_from_wavelength(wavelength);
    }
    read_if(p, "exponent", c.exponent);
    read_if(p, "bob_distance", c.bob_distance);
    read_if(p, "eve_distance", c.eve_distance);
  }

  if (j.contains("solver")) {
    const auto& s = j.at("solver");
    detail::reject_unknown(s,
                           {"ao_max_iterations", "rcg_outer_max", "rcg_inner_max", "armijo_max_trials", "armijo_c",
                            "armijo_contraction", "armijo_initial_step", "grad_tol", "water_tol", "beta_samples",
                            "rng_seed", "jamming_model"},
                           "solver");
    auto& o = e.solver;
    read_if(s, "ao_max_iterations", o.ao_max_iterations);
    read_if(s, "rcg_outer_max", o.rcg_outer_max);
    read_if(s, "rcg_inner_max", o.rcg_inner_max);
    read_if(s, "armijo_max_trials", o.armijo_max_trials);
    read_if(s, "armijo_c", o.armijo_c);
    read_if(s, "armijo_contraction", o.armijo_contraction);
    read_if(s, "armijo_initial_step", o.armijo_initial_step);
    read_if(s, "grad_tol", o.grad_tol);
    read_if(s, "water_tol", o.water_tol);
    read_if(s, "beta_samples", o.beta_samples);
    read_if(s, "rng_seed", o.rng_seed);
    std::string model = "expected";
    read_if(s, "jamming_model", model);
    if (model == "expected") {
      o.jamming_model = JammingModel::Expected;
    } else if (model == "closed_form") {
      o.jamming_model = JammingModel::ClosedForm;
    } else {
      throw Error(ErrorCode::InvalidConfig, "solver.jamming_model must be 'expected' or 'closed_form'");
    }
  }

  if (j.contains("simulation")) {
    const auto& s = j.at("simulation");
    detail::reject_unknown(s, {"symbols_per_trial", "jobs", "eve_noise_tracks_bob"}, "simulation");
    read_if(s, "symbols_per_trial", e.simulation.symbols_per_trial);
    read_if(s, "jobs", e.simulation.jobs);
    read_if(s, "eve_noise_tracks_bob", e.simulation.eve_noise_tracks_bob);
    require(e.simulation.symbols_per_trial >= 1, ErrorCode::InvalidConfig, "symbols_per_trial must be >= 1");
    require(e.simulation.jobs >= 0, ErrorCode::InvalidConfig, "jobs must be >= 0");
  }

  validate_config(e.system);
  validate_path_loss(e.path_loss);
  validate_solver(e.solver);
  return e;
}

inline ExperimentConfig parse_experiment(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("malformed JSON: ") + e.what());
  }
  return experiment_from_json(j);
}

inline ExperimentConfig load_experiment(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_experiment(buf.str());
}

/// Canonical form used for hashing: sorted keys, compact, shortest round-trip doubles.
inline std::string canonical_json(const ExperimentConfig& e) { return to_json(e).dump(); }

}  // namespace rissec
