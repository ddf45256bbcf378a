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

#include "rissec/config_io.hpp"
#include "rissec/montecarlo.hpp"
#include "rissec/types.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace rissec {

inline constexpr const char* kVersion = "0.1.0";

/// Shortest-safe round-trip formatting (17 significant digits).
inline std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << csv_escape(fields[i]);
  }
  out << "\r\n";
}

/// RFC 4180 records: quoted fields may contain commas, doubled quotes and
/// line breaks. Accepts CRLF or LF line ends.
inline std::vector<std::vector<std::string>> read_csv(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any = false;
  char c;
  while (in.get(c)) {
    any = true;
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field += '"';
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
    } else if (c == '\r') {
      // swallowed; the following '\n' ends the record
    } else if (c == '\n') {
      row.push_back(std::move(field));
      field.clear();
      rows.push_back(std::move(row));
      row.clear();
      any = false;
    } else {
      field += c;
    }
  }
  require(!quoted, ErrorCode::Io, "unterminated quoted CSV field");
  if (any) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline const std::vector<std::string>& summary_header() {
  static const std::vector<std::string> h{"scheme", "axis_value", "user", "metric", "mean", "stderr", "trials"};
  return h;
}

inline void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  write_csv_row(out, summary_header());
  for (const auto& r : rows)
    write_csv_row(out, {r.scheme, format_double(r.axis_value), r.user, r.metric, format_double(r.mean),
                        format_double(r.stderr_value), std::to_string(r.trials)});
}

inline std::vector<SummaryRow> read_summary_csv(std::istream& in) {
  const auto rows = read_csv(in);
  require(!rows.empty() && rows.front() == summary_header(), ErrorCode::Io, "unexpected CSV header");
  std::vector<SummaryRow> out;
  for (size_t i = 1; i < rows.size(); ++i) {
    const auto& f = rows[i];
    require(f.size() == 7, ErrorCode::Io, "CSV row " + std::to_string(i) + " has " + std::to_string(f.size()) + " fields");
    out.push_back({f[0], std::stod(f[1]), f[2], f[3], std::stod(f[4]), std::stod(f[5]), std::stol(f[6])});
  }
  return out;
}

/// Git blob hash: SHA-1 over "blob <len>\0<content>", lower-case hex.
inline std::string git_blob_hash(const std::string& content) {
  const std::string header = "blob " + std::to_string(content.size()) + '\0';
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  require(ctx != nullptr, ErrorCode::Io, "cannot allocate digest context");
  const bool ok = EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr) == 1 &&
                  EVP_DigestUpdate(ctx, header.data(), header.size()) == 1 &&
                  EVP_DigestUpdate(ctx, content.data(), content.size()) == 1 &&
                  EVP_DigestFinal_ex(ctx, digest, &len) == 1;
  EVP_MD_CTX_free(ctx);
  require(ok, ErrorCode::Io, "SHA-1 digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

inline std::string config_hash(const ExperimentConfig& e) { return git_blob_hash(canonical_json(e)); }

inline std::string utc_timestamp(std::chrono::system_clock::time_point t = std::chrono::system_clock::now()) {
  const std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct RunManifest {
  ExperimentConfig config;
  std::string command;
  std::uint64_t seed = 0;
  std::string started_at;
  std::string finished_at;
  nlohmann::json extra = nlohmann::json::object();

  nlohmann::json to_json() const {
    return {{"config", rissec::to_json(config)},
            {"config_hash", config_hash(config)},
            {"seed", seed},
            {"command", command},
            {"started_at", started_at},
            {"finished_at", finished_at},
            {"version", kVersion},
            {"extra", extra}};
  }
};

/// Writes `text` to `path` via a temporary file and rename, so a failed run
/// never leaves a partial file under the final name.
inline void write_file_atomic(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    require(static_cast<bool>(out), ErrorCode::Io, "cannot open '" + tmp + "' for writing");
    out << text;
    require(static_cast<bool>(out), ErrorCode::Io, "write to '" + tmp + "' failed");
  }
  require(std::rename(tmp.c_str(), path.c_str()) == 0, ErrorCode::Io, "cannot rename '" + tmp + "' to '" + path + "'");
}

}  // namespace rissec
