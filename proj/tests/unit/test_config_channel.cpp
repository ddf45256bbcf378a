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

#include "support.hpp"

using namespace testing;

TEST_CASE("default geometry validates") {
  const SystemConfig c;
  CHECK(c.users == 2);
  CHECK(c.tx_antennas == 16);
  CHECK(c.antennas_per_user == 8);
  CHECK(c.ris_elements == 16);
  CHECK(c.eve_antennas == 3);
  CHECK_NOTHROW(validate_config(c));
}

TEST_CASE("validation rejects inconsistent or out-of-range fields") {
  SystemConfig c;
  c.tx_antennas = 15;
  CHECK(throws_code([&] { validate_config(c); }, ErrorCode::DimensionMismatch));

  c = SystemConfig{};
  c.antennas_per_user = 6;
  c.tx_antennas = 12;
  CHECK(throws_code([&] { validate_config(c); }, ErrorCode::NotPowerOfTwo));

  c = SystemConfig{};
  c.noise_var_bob = 0.0;
  CHECK(throws_code([&] { validate_config(c); }, ErrorCode::NonPositive));

  c = SystemConfig{};
  c.qam_order = 8;
  CHECK(throws_code([&] { validate_config(c); }, ErrorCode::BadOrder));
}

TEST_CASE("minimal single-user system validates") {
  SystemConfig c;
  c.users = 1;
  c.tx_antennas = 4;
  c.antennas_per_user = 4;
  c.ris_elements = 1;
  c.eve_antennas = 1;
  c.noise_var_bob = c.noise_var_eve = 1.0;
  CHECK_NOTHROW(validate_config(c));
}

TEST_CASE("SNR mapping uses Ptot over K sigma_B^2") {
  const SystemConfig c = with_snr_db(SystemConfig{}, 10.0);
  CHECK_THAT(c.noise_var_bob, WithinRel(1.0 / (2.0 * 10.0), 1e-12));
  CHECK(c.noise_var_eve == c.noise_var_bob);
  CHECK_THAT(snr_db(c), WithinAbs(10.0, 1e-12));
  const SystemConfig fixed_eve = with_snr_db(SystemConfig{}, 10.0, false);
  CHECK(fixed_eve.noise_var_eve == SystemConfig{}.noise_var_eve);
}

TEST_CASE("experiment JSON round-trips and rejects unknown keys") {
  ExperimentConfig e;
  e.system.ris_elements = 32;
  e.path_loss.bob_gain_db = {0.0, -20.0};
  e.solver.jamming_model = JammingModel::ClosedForm;
  e.simulation.symbols_per_trial = 7;
  CHECK(parse_experiment(canonical_json(e)) == e);

  CHECK(throws_code([] { parse_experiment(R"({"system": {"userz": 2}})"); }, ErrorCode::InvalidConfig));
  CHECK(throws_code([] { parse_experiment("{not json"); }, ErrorCode::InvalidConfig));
  CHECK(throws_code([] { parse_experiment(R"({"system": {"tx_antennas": 15}})"); }, ErrorCode::DimensionMismatch));
  CHECK(throws_code([] { load_experiment("/nonexistent/config.json"); }, ErrorCode::Io));
}

TEST_CASE("wavelength sets the free-space reference loss") {
  const ExperimentConfig e = parse_experiment(R"({"path_loss": {"mode": "distance", "wavelength": 0.1,
                                                   "bob_distance": [1, 2]}})");
  CHECK_THAT(e.path_loss.reference_loss, WithinRel(std::pow(0.1 / (4 * M_PI), 2), 1e-12));
}

TEST_CASE("shipped default config matches the built-in defaults") {
  const char* dir = std::getenv("RISSEC_SOURCE_DIR");
  if (!dir) SKIP("RISSEC_SOURCE_DIR not set");
  CHECK(load_experiment(std::string(dir) + "/configs/default.json") == ExperimentConfig{});
}

// ---- channel ---------------------------------------------------------------

TEST_CASE("complex Gaussian draws have zero mean and unit variance") {
  Rng r(7);
  const int n = 1000000;
  cdouble sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const cdouble z = sample_rayleigh(1, 1, r)(0, 0);
    sum += z;
    sum_sq += std::norm(z);
  }
  const cdouble mean = sum / static_cast<double>(n);
  const double var = sum_sq / n - std::norm(mean);
  CHECK(std::abs(mean) < 0.005);
  CHECK(var >= 0.99);
  CHECK(var <= 1.01);
}

TEST_CASE("sample shapes and determinism") {
  Rng a(3), b(3);
  const ComplexMatrix m = sample_rayleigh(2, 3, a);
  CHECK(m.rows() == 2);
  CHECK(m.cols() == 3);
  CHECK(m.allFinite());
  CHECK(m == sample_rayleigh(2, 3, b));
}

TEST_CASE("large-scale amplitudes") {
  PathLossConfig p;
  CHECK(large_scale_amplitude(p, Link::bob(0)) == 1.0);
  p.bob_gain_db = {0.0, -20.0};
  CHECK_THAT(large_scale_amplitude(p, Link::bob(1)), WithinRel(0.1, 1e-14));
  CHECK(throws_code([&] { large_scale_amplitude(p, Link::bob(2)); }, ErrorCode::UnknownLink));

  PathLossConfig d;
  d.mode = PathLossConfig::Mode::Distance;
  d.reference_loss = 1.0;
  d.exponent = 2.0;
  d.bob_distance = {2.0};
  CHECK_THAT(large_scale_amplitude(d, Link::bob(0)), WithinRel(0.5, 1e-14));
}

TEST_CASE("channel set shapes") {
  Rng r(1);
  const ChannelSet ch = generate_channel_set(validate_config(SystemConfig{}), {}, r);
  CHECK(ch.G.rows() == 16);
  CHECK(ch.G.cols() == 16);
  CHECK(ch.hB.size() == 2);
  CHECK(ch.hB[0].size() == 16);
  CHECK(ch.HE.rows() == 3);
  CHECK(ch.HE.cols() == 16);

  SystemConfig tiny;
  tiny.ris_elements = 1;
  tiny.eve_antennas = 1;
  const ChannelSet t = generate_channel_set(validate_config(tiny), {}, r);
  CHECK(t.HE.rows() == 1);
  CHECK(t.HE.cols() == 1);
}

TEST_CASE("relative Bob gain scales the mean channel energy") {
  PathLossConfig p;
  p.bob_gain_db = {0.0, -20.0};
  const ValidatedConfig cfg = validate_config(SystemConfig{});
  double e0 = 0.0, e1 = 0.0;
  for (int i = 0; i < 10000; ++i) {
    Rng r = Rng(11).substream(static_cast<std::uint64_t>(i));
    const ChannelSet ch = generate_channel_set(cfg, p, r);
    e0 += ch.hB[0].squaredNorm();
    e1 += ch.hB[1].squaredNorm();
  }
  CHECK_THAT(e1 / e0, WithinRel(0.01, 0.05));
}

TEST_CASE("channel binary dump round-trips") {
  Rng r(5);
  const ChannelSet ch = generate_channel_set(validate_config(SystemConfig{}), {}, r);
  std::stringstream buf;
  write_channel_set(buf, ch);
  const ChannelSet back = read_channel_set(buf);
  CHECK(back.G == ch.G);
  CHECK(back.HE == ch.HE);
  CHECK(back.hB[1] == ch.hB[1]);
  CHECK(back.antennas_per_user == ch.antennas_per_user);
}

TEST_CASE("substreams are independent of draw order") {
  const Rng root(42);
  Rng a = root.substream(3);
  Rng warm = root.substream(2);
  for (int i = 0; i < 100; ++i) warm.uniform();
  Rng b = root.substream(3);
  CHECK(a.uniform() == b.uniform());
  CHECK(root.substream(1, 2).uniform() != root.substream(2, 1).uniform());
}
