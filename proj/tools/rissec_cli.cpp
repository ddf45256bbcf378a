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

#include "rissec/rissec.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace rissec;

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

struct Common {
  std::string config_path;
  std::string out;
  std::uint64_t seed = 1;
  int jobs = 0;
};

ExperimentConfig load_config(const Common& c) {
  std::string path = c.config_path;
  if (path.empty()) {
    if (const char* env = std::getenv("RISSEC_CONFIG")) path = env;
  }
  ExperimentConfig e = path.empty() ? ExperimentConfig{} : load_experiment(path);
  validate_config(e.system);
  validate_path_loss(e.path_loss);
  validate_solver(e.solver);
  return e;
}

std::vector<Scheme> parse_schemes(const std::vector<std::string>& names) {
  std::vector<Scheme> out;
  for (const auto& n : names) out.push_back(parse_scheme(n));
  require(!out.empty(), ErrorCode::InvalidConfig, "--schemes must name at least one scheme");
  return out;
}

std::string command_line(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s += ' ';
    s += argv[i];
  }
  return s;
}

/// CSV to `out` (or stdout when empty) and, with a file target, the manifest
/// next to it as `<out>.manifest.json`.
void emit(const Common& c, const std::vector<SummaryRow>& rows, RunManifest manifest) {
  std::ostringstream csv;
  write_summary_csv(csv, rows);
  manifest.finished_at = utc_timestamp();
  if (c.out.empty()) {
    std::cout << csv.str();
    return;
  }
  write_file_atomic(c.out, csv.str());
  write_file_atomic(c.out + ".manifest.json", manifest.to_json().dump(2) + "\n");
}

std::vector<double> default_grid(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::Snr: return {0, 5, 10, 15, 20};
    case SweepAxis::RisElements: return {4, 8, 16, 32};
    case SweepAxis::Users: return {1, 2, 3};
  }
  return {};
}

int run(int argc, char** argv) {
  CLI::App app{"Secrecy-rate optimization and Monte Carlo experiments for RIS-assisted downlinks"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config_path, "Experiment config JSON (default: $RISSEC_CONFIG or built-in)");
    sub->add_option("--seed", common.seed, "Root random seed");
    sub->add_option("--jobs", common.jobs, "Worker threads (0: available parallelism)")->check(CLI::NonNegativeNumber);
  };

  // secrecy-sweep
  auto* secrecy = app.add_subcommand("secrecy-sweep", "Mean secrecy sum rate per scheme over a parameter grid");
  add_common(secrecy);
  std::string axis_name = "snr";
  std::vector<std::string> scheme_names{"bs", "ris", "joint", "ao"};
  std::vector<double> grid;
  int seeds = 50;
  std::vector<double> gains;
  secrecy->add_option("--axis", axis_name, "Sweep axis: snr, m or k");
  secrecy->add_option("--schemes", scheme_names, "Comma-separated schemes (bs, ris, joint, ao)")->delimiter(',');
  secrecy->add_option("--grid", grid, "Comma-separated grid values")->delimiter(',');
  secrecy->add_option("--seeds", seeds, "Paired channel seeds per grid point")->check(CLI::PositiveNumber);
  secrecy->add_option("--gain-db", gains, "Per-user Bob gains in dB")->delimiter(',');
  secrecy->add_option("--out", common.out, "Output CSV path (default: stdout)");

  // ber-sweep
  auto* ber = app.add_subcommand("ber-sweep", "Uncoded Bob and Eve BER versus SNR");
  add_common(ber);
  std::vector<std::string> ber_schemes{"bs", "ris", "joint", "ao"};
  std::vector<double> snr_grid{0, 5, 10, 15};
  std::vector<int> m_list;
  std::vector<double> ber_gains;
  int trials = 1000;
  ber->add_option("--schemes", ber_schemes, "Comma-separated schemes")->delimiter(',');
  ber->add_option("--grid", snr_grid, "Comma-separated SNR points in dB")->delimiter(',');
  ber->add_option("--m-list", m_list, "Comma-separated RIS sizes; one curve set per size")->delimiter(',');
  ber->add_option("--gain-db", ber_gains, "Per-user Bob gains in dB")->delimiter(',');
  ber->add_option("--trials", trials, "Channel trials per SNR point");
  ber->add_option("--out", common.out, "Output CSV path (default: stdout)");

  // validate
  auto* validate = app.add_subcommand("validate", "Run the oracle suites");
  add_common(validate);
  std::vector<std::string> only;
  std::string fault;
  std::string report_path;
  bool all_suites = false;
  validate->add_option("--only", only, "Comma-separated suite names")->delimiter(',');
  validate->add_flag("--all", all_suites, "Include the long statistical suites");
  validate->add_option("--inject-fault", fault, "Deliberate defect for testing the suites: gradient-sign");
  validate->add_option("--report", report_path, "Write the JSON report here");
  common.seed = ValidationOptions{}.seed;

  // bench
  auto* bench = app.add_subcommand("bench", "Time per inner phase-solver iteration versus M");
  add_common(bench);
  std::vector<int> bench_m{8, 16, 32, 64};
  std::vector<int> bench_k{2};
  double min_seconds = 0.5;
  bench->add_option("--m-list", bench_m, "Comma-separated RIS sizes")->delimiter(',');
  bench->add_option("--k-list", bench_k, "Comma-separated user counts")->delimiter(',');
  bench->add_option("--min-seconds", min_seconds, "Minimum timed seconds per row")->check(CLI::PositiveNumber);
  bench->add_option("--out", common.out, "Output CSV path (default: none)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  RunManifest manifest;
  manifest.command = command_line(argc, argv);
  manifest.started_at = utc_timestamp();
  manifest.seed = common.seed;

  try {
    if (*secrecy) {
      ExperimentConfig cfg = load_config(common);
      if (!gains.empty()) cfg.path_loss.bob_gain_db = gains;
      const SweepAxis axis = parse_axis(axis_name);
      if (grid.empty()) grid = default_grid(axis);
      const std::vector<Scheme> schemes = parse_schemes(scheme_names);
      const SecrecySweep sw = run_secrecy_sweep(cfg, schemes, axis, grid, seeds, Rng(common.seed), common.jobs);
      manifest.config = cfg;
      manifest.extra = {{"axis", to_string(axis)},
                        {"seeds", seeds},
                        {"resampled_singular", sw.resampled_singular},
                        {"safeguard_events", sw.safeguard_events}};
      emit(common, sw.summary(), manifest);
      return kExitOk;
    }

    if (*ber) {
      require(trials >= 1, ErrorCode::InvalidConfig, "--trials must be >= 1");
      ExperimentConfig cfg = load_config(common);
      if (!ber_gains.empty()) cfg.path_loss.bob_gain_db = ber_gains;
      const std::vector<Scheme> schemes = parse_schemes(ber_schemes);
      const std::vector<int> sizes = m_list.empty() ? std::vector<int>{cfg.system.ris_elements} : m_list;
      std::vector<SummaryRow> rows;
      BetaCache cache;
      nlohmann::json resampled = nlohmann::json::object();
      for (int M : sizes) {
        ExperimentConfig e = cfg;
        e.system.ris_elements = M;
        validate_config(e.system);
        for (Scheme s : schemes) {
          const BerSweep sw = run_ber_sweep(e, s, snr_grid, trials, Rng(common.seed), common.jobs, &cache);
          // With --m-list the size is appended to the scheme label, e.g. "ris@m16".
          for (SummaryRow r : sw.summary()) {
            if (!m_list.empty()) r.scheme += "@m" + std::to_string(M);
            rows.push_back(std::move(r));
          }
          resampled[std::string(to_string(s)) + "@m" + std::to_string(M)] = sw.resampled_singular;
        }
      }
      manifest.config = cfg;
      manifest.extra = {{"trials", trials}, {"m_list", sizes}, {"resampled_singular", resampled}};
      emit(common, rows, manifest);
      return kExitOk;
    }

    if (*validate) {
      ValidationOptions opts;
      opts.seed = common.seed;
      opts.jobs = common.jobs;
      if (!fault.empty()) {
        require(fault == "gradient-sign", ErrorCode::InvalidConfig, "unknown fault '" + fault + "'");
        opts.fault = Fault::GradientSign;
      }
      for (const auto& name : only) {
        bool known = false;
        for (const auto& s : validation_suites()) known = known || s.name == name;
        require(known, ErrorCode::InvalidConfig, "unknown suite '" + name + "'");
      }
      bool ok = true;
      nlohmann::json report = nlohmann::json::array();
      for (const auto& s : validation_suites()) {
        const bool selected = only.empty() ? (s.in_default_set || all_suites)
                                           : std::find(only.begin(), only.end(), s.name) != only.end();
        if (!selected) continue;
        const SuiteResult r = run_suite(s, opts);
        ok = ok && r.passed;
        std::cout << (r.passed ? "PASS " : "FAIL ") << std::left << std::setw(20) << r.name << ' ' << r.detail
                  << " [" << std::fixed << std::setprecision(1) << r.seconds << " s]" << std::defaultfloat << '\n'
                  << std::flush;
        report.push_back(to_json(r));
      }
      if (!report_path.empty())
        write_file_atomic(report_path, nlohmann::json{{"passed", ok}, {"seed", opts.seed}, {"suites", report}}
                                               .dump(2) + "\n");
      return ok ? kExitOk : kExitFailed;
    }

    if (*bench) {
      require(!bench_m.empty() && !bench_k.empty(), ErrorCode::InvalidConfig, "--m-list and --k-list must be nonempty");
      const ExperimentConfig cfg = load_config(common);
      std::ostringstream csv;
      write_csv_row(csv, {"M", "K", "inner_iterations", "seconds_per_iteration", "evaluations_per_iteration"});
      std::cout << std::setw(6) << "M" << std::setw(4) << "K" << std::setw(12) << "iters" << std::setw(16)
                << "us/iter" << std::setw(12) << "evals/iter" << '\n';
      for (int K : bench_k) {
        std::vector<double> x, t;
        for (int M : bench_m) {
          const BenchRow row = bench_inner_iteration(cfg.system, M, K, min_seconds, Rng(common.seed));
          x.push_back(M);
          t.push_back(row.seconds_per_iteration());
          std::cout << std::setw(6) << M << std::setw(4) << K << std::setw(12) << row.inner_iterations
                    << std::setw(16) << std::setprecision(4) << 1e6 * row.seconds_per_iteration() << std::setw(12)
                    << std::setprecision(3) << row.evaluations_per_iteration << '\n';
          write_csv_row(csv, {std::to_string(M), std::to_string(K), std::to_string(row.inner_iterations),
                              format_double(row.seconds_per_iteration()),
                              format_double(row.evaluations_per_iteration)});
        }
        if (x.size() >= 2)
          std::cout << "K = " << K << ": fitted exponent of time vs M = " << std::setprecision(4)
                    << fitted_exponent(x, t) << '\n';
      }
      if (bench_k.size() >= 2) {
        // scaling in K at the largest M
        std::vector<double> x, t;
        for (int K : bench_k) {
          const BenchRow row = bench_inner_iteration(cfg.system, bench_m.back(), K, min_seconds, Rng(common.seed));
          x.push_back(K);
          t.push_back(row.seconds_per_iteration());
        }
        std::cout << "M = " << bench_m.back() << ": fitted exponent of time vs K = " << std::setprecision(4)
                  << fitted_exponent(x, t) << '\n';
      }
      if (!common.out.empty()) write_file_atomic(common.out, csv.str());
      return kExitOk;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "fatal: " << e.what() << '\n';
    return kExitUsage;
  }
}
