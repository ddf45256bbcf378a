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

#include "rissec/config.hpp"
#include "rissec/rng.hpp"
#include "rissec/types.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

namespace rissec {

/// Identifies one propagation link of the cascaded model. There is no direct
/// AP->user link anywhere.
struct Link {
  enum class Kind { ApRis, RisBob, RisEve };
  Kind kind;
  int user = 0;  // only meaningful for RisBob

  static Link ap_ris() { return {Kind::ApRis, 0}; }
  static Link bob(int k) { return {Kind::RisBob, k}; }
  static Link eve() { return {Kind::RisEve, 0}; }
};

/// One realization of every channel.
///
/// G is M x Nt and holds one M x nt block per user; `G_block(k)` is a view of
/// those columns, so downstream code never copies a block out of G.
struct ChannelSet {
  ComplexMatrix G;                  // AP -> RIS, M x Nt
  std::vector<ComplexVector> hB;    // RIS -> user k, length M each
  ComplexMatrix HE;                 // RIS -> Eve, Ne x M
  int antennas_per_user = 1;
  double amp_ap_ris = 1.0;
  std::vector<double> amp_bob;
  double amp_eve = 1.0;

  int users() const { return static_cast<int>(hB.size()); }
  int ris_elements() const { return static_cast<int>(G.rows()); }
  int eve_antennas() const { return static_cast<int>(HE.rows()); }

  auto G_block(int k) const { return G.middleCols(static_cast<Eigen::Index>(k) * antennas_per_user, antennas_per_user); }
};

/// i.i.d. CN(0,1) entries, filled column-major.
inline ComplexMatrix sample_rayleigh(int rows, int cols, Rng& rng) {
  require(rows >= 1 && cols >= 1, ErrorCode::DimensionMismatch, "sample_rayleigh needs rows, cols >= 1");
  ComplexMatrix m(rows, cols);
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r) m(r, c) = rng.complex_normal();
  return m;
}

inline double db_to_amplitude(double gain_db) { return std::pow(10.0, gain_db / 20.0); }

inline double large_scale_amplitude(const PathLossConfig& plc, Link link) {
  using Mode = PathLossConfig::Mode;
  switch (link.kind) {
    case Link::Kind::ApRis:
      return db_to_amplitude(plc.ap_ris_gain_db);
    case Link::Kind::RisEve:
      if (plc.mode == Mode::DirectGain) return db_to_amplitude(plc.eve_gain_db);
      return std::sqrt(plc.reference_loss * std::pow(plc.eve_distance, -plc.exponent));
    case Link::Kind::RisBob: {
      require(link.user >= 0, ErrorCode::UnknownLink, "negative user index");
      if (plc.mode == Mode::DirectGain) {
        if (plc.bob_gain_db.empty()) return 1.0;
        require(link.user < static_cast<int>(plc.bob_gain_db.size()), ErrorCode::UnknownLink,
                "no gain configured for user " + std::to_string(link.user));
        return db_to_amplitude(plc.bob_gain_db[static_cast<size_t>(link.user)]);
      }
      require(link.user < static_cast<int>(plc.bob_distance.size()), ErrorCode::UnknownLink,
              "no distance configured for user " + std::to_string(link.user));
      return std::sqrt(plc.reference_loss *
                       std::pow(plc.bob_distance[static_cast<size_t>(link.user)], -plc.exponent));
    }
  }
  throw Error(ErrorCode::UnknownLink, "unknown link kind");
}

/// Draw order is fixed (G, then hB[0..K-1], then HE) so a stream always yields
/// the same realization.
inline ChannelSet generate_channel_set(const ValidatedConfig& vcfg, const PathLossConfig& plc, Rng& rng) {
  const SystemConfig& cfg = vcfg.get();
  ChannelSet ch;
  ch.antennas_per_user = cfg.antennas_per_user;
  ch.amp_ap_ris = large_scale_amplitude(plc, Link::ap_ris());
  ch.amp_eve = large_scale_amplitude(plc, Link::eve());
  ch.amp_bob.resize(static_cast<size_t>(cfg.users));
  for (int k = 0; k < cfg.users; ++k) ch.amp_bob[static_cast<size_t>(k)] = large_scale_amplitude(plc, Link::bob(k));

  ch.G = ch.amp_ap_ris * sample_rayleigh(cfg.ris_elements, cfg.tx_antennas, rng);
  ch.hB.reserve(static_cast<size_t>(cfg.users));
  for (int k = 0; k < cfg.users; ++k)
    ch.hB.push_back(ch.amp_bob[static_cast<size_t>(k)] * sample_rayleigh(cfg.ris_elements, 1, rng).col(0));
  ch.HE = ch.amp_eve * sample_rayleigh(cfg.eve_antennas, cfg.ris_elements, rng);
  return ch;
}

// Binary fixture format (little-endian):
//   magic "RISC" | u32 version=1 | i32 K, nt, M, Ne
//   f64 amp_ap_ris, amp_eve, amp_bob[K]
//   G (M x Nt, column-major), hB[0..K-1] (M each), HE (Ne x M, column-major)
// Complex entries are interleaved (re, im) f64 pairs.
namespace detail {

static_assert(std::endian::native == std::endian::little, "channel dump assumes a little-endian host");

template <typename T>
void write_pod(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  require(static_cast<bool>(in), ErrorCode::Io, "truncated channel dump");
  return value;
}

inline void write_complex_block(std::ostream& out, const ComplexMatrix& m) {
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      write_pod(out, m(r, c).real());
      write_pod(out, m(r, c).imag());
    }
}

inline ComplexMatrix read_complex_block(std::istream& in, int rows, int cols) {
  ComplexMatrix m(rows, cols);
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      const double re = read_pod<double>(in);
      const double im = read_pod<double>(in);
      m(r, c) = {re, im};
    }
  return m;
}

}  // namespace detail

inline void write_channel_set(std::ostream& out, const ChannelSet& ch) {
  out.write("RISC", 4);
  detail::write_pod<std::uint32_t>(out, 1);
  detail::write_pod<std::int32_t>(out, ch.users());
  detail::write_pod<std::int32_t>(out, ch.antennas_per_user);
  detail::write_pod<std::int32_t>(out, ch.ris_elements());
  detail::write_pod<std::int32_t>(out, ch.eve_antennas());
  detail::write_pod(out, ch.amp_ap_ris);
  detail::write_pod(out, ch.amp_eve);
  for (double a : ch.amp_bob) detail::write_pod(out, a);
  detail::write_complex_block(out, ch.G);
  for (const auto& h : ch.hB) detail::write_complex_block(out, h);
  detail::write_complex_block(out, ch.HE);
}

inline ChannelSet read_channel_set(std::istream& in) {
  char magic[4] = {};
  in.read(magic, 4);
  require(in && std::memcmp(magic, "RISC", 4) == 0, ErrorCode::Io, "not a channel dump");
  require(detail::read_pod<std::uint32_t>(in) == 1, ErrorCode::Io, "unsupported channel dump version");
  const int K = detail::read_pod<std::int32_t>(in);
  const int nt = detail::read_pod<std::int32_t>(in);
  const int M = detail::read_pod<std::int32_t>(in);
  const int Ne = detail::read_pod<std::int32_t>(in);
  require(K >= 1 && nt >= 1 && M >= 1 && Ne >= 1, ErrorCode::Io, "corrupt channel dump header");

  ChannelSet ch;
  ch.antennas_per_user = nt;
  ch.amp_ap_ris = detail::read_pod<double>(in);
  ch.amp_eve = detail::read_pod<double>(in);
  ch.amp_bob.resize(static_cast<size_t>(K));
  for (auto& a : ch.amp_bob) a = detail::read_pod<double>(in);
  ch.G = detail::read_complex_block(in, M, K * nt);
  for (int k = 0; k < K; ++k) ch.hB.push_back(detail::read_complex_block(in, M, 1).col(0));
  ch.HE = detail::read_complex_block(in, Ne, M);
  return ch;
}

inline void save_channel_set(const std::string& path, const ChannelSet& ch) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorCode::Io, "cannot write '" + path + "'");
  write_channel_set(out, ch);
}

inline ChannelSet load_channel_set(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::Io, "cannot read '" + path + "'");
  return read_channel_set(in);
}

}  // namespace rissec
