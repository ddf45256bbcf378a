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

// Oracle suites shared by `rissec_cli validate` and the acceptance test.
// Every suite compares library output against an independent computation
// (grid search, random search, finite differences, Monte Carlo, or a paired
// statistical comparison) and returns a pass/fail record with metrics.

#pragma once

#include "rissec/ao.hpp"
#include "rissec/bench.hpp"
#include "rissec/beamformer.hpp"
#include "rissec/channel.hpp"
#include "rissec/config.hpp"
#include "rissec/config_io.hpp"
#include "rissec/montecarlo.hpp"
#include "rissec/power_alloc.hpp"
#include "rissec/precoder.hpp"
#include "rissec/rcg.hpp"
#include "rissec/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

namespace rissec {

struct SuiteResult {
  std::string name;
  int criterion = 0;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  nlohmann::json metrics = nlohmann::json::object();
};

enum class Fault { None, GradientSign };

struct ValidationOptions {
  std::uint64_t seed = 20251015;
  int jobs = 0;
  Fault fault = Fault::None;
};

namespace validation {

inline SuiteResult make_result(std::string name, int criterion) {
  SuiteResult r;
  r.name = std::move(name);
  r.criterion = criterion;
  return r;
}

inline std::string fmt(double x, int precision = 4) {
  std::ostringstream s;
  s.precision(precision);
  s << x;
  return s.str();
}

/// z-score of the mean of paired differences.
inline double paired_z(const std::vector<double>& hi, const std::vector<double>& lo, double* mean_out = nullptr) {
  std::vector<double> d(hi.size());
  for (size_t i = 0; i < hi.size(); ++i) d[i] = hi[i] - lo[i];
  double m, se;
  mean_and_stderr(d, m, se);
  if (mean_out) *mean_out = m;
  if (se == 0.0) return m > 0.0 ? std::numeric_limits<double>::infinity() : (m < 0.0 ? -1e300 : 0.0);
  return m / se;
}

inline PhaseTerm random_term(int M, int Ne, Rng& r) {
  PhaseTerm t;
  t.A = 0.1 + 5.0 * r.uniform();
  t.B = 0.1 + 5.0 * r.uniform();
  t.u = sample_rayleigh(M, 1, r).col(0);
  const ComplexMatrix C = sample_rayleigh(Ne, M, r);
  t.D = C.adjoint() * C;
  return t;
}

inline PhaseProblem random_problem(int K, int M, Rng& r) {
  PhaseProblem p;
  for (int k = 0; k < K; ++k) p.terms.push_back(random_term(M, 1 + r.uniform_int(3), r));
  return p;
}

/// Default system: K = 2, Nt = 16, nt = 8, M = 16, Ne = 3, Ptot = 1.
inline SystemConfig default_system() { return SystemConfig{}; }

// ---- 1 -------------------------------------------------------------------

inline SuiteResult zero_forcing(const ValidationOptions& o) {
  SuiteResult res = make_result("zero-forcing", 1);
  const ValidatedConfig vcfg = validate_config(default_system());
  const QamConstellation qam(vcfg->qam_order, 1.0 / vcfg->users);
  const Rng root = Rng(o.seed).substream(1);
  double worst = 0.0, leakage = 0.0;
  int resampled = 0;
  const int n = 1000;
  for (int i = 0; i < n; ++i) {
    for (int attempt = 0;; ++attempt) {
      Rng r = root.substream(static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(attempt));
      const ChannelSet ch = generate_channel_set(vcfg, PathLossConfig{}, r);
      const PhaseVector v = PhaseVector::random(vcfg->ris_elements, r);
      const BeamformerSet W = random_beamformers(vcfg->users, vcfg->antennas_per_user, vcfg->total_power, r);
      ComplexVector s(vcfg->users);
      for (int k = 0; k < vcfg->users; ++k) s(k) = qam.point(qam.random_label(r));
      try {
        const PrecoderResult pr = precode(ch, v, W, s);
        worst = std::max(worst, interference_residual(ch, v, W, s, pr.varpi) / pr.q.norm());
        leakage = std::max(leakage, cross_user_leakage(ch, v, W, s, pr.varpi) / pr.q.norm());
        break;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::SingularSystem) throw;
        ++resampled;
      }
    }
  }
  res.passed = worst <= 1e-9;
  res.detail = "max residual/||q|| = " + fmt(worst) + " over " + std::to_string(n) + " instances (bound 1e-9)";
  res.metrics = {{"max_relative_residual", worst},
                 {"max_relative_cross_user_leakage", leakage},
                 {"instances", n},
                 {"resampled", resampled}};
  return res;
}

// ---- 2 -------------------------------------------------------------------

inline double grid_max_objective(const PowerCoefficients& c) {
  auto term = [&](int k, double p) { return std::log1p(c.a(k) * p) / kLn2 - std::log1p(c.b(k) * p) / kLn2; };
  double best = -1e300;
  if (c.a.size() == 2) {
    const int steps = 10000;
    for (int i = 0; i <= steps; ++i) {
      const double p = static_cast<double>(i) / steps;
      best = std::max(best, term(0, p) + term(1, 1.0 - p));
    }
  } else {
    const int steps = 1000;
    for (int i = 0; i <= steps; ++i) {
      const double p0 = static_cast<double>(i) / steps;
      const double t0 = term(0, p0);
      for (int j = 0; i + j <= steps; ++j) {
        const double p1 = static_cast<double>(j) / steps;
        best = std::max(best, t0 + term(1, p1) + term(2, std::max(0.0, 1.0 - p0 - p1)));
      }
    }
  }
  return best;
}

/// Case mix by index: general, one inactive user, one saturating user, weak
/// secrecy margins. At least one user is always active.
inline PowerCoefficients random_coefficients(int K, int kind, Rng& r) {
  PowerCoefficients c;
  c.a.resize(K);
  c.b.resize(K);
  auto logu = [&](double lo, double hi) { return std::pow(10.0, lo + (hi - lo) * r.uniform()); };
  for (int k = 0; k < K; ++k) {
    c.a(k) = logu(-1.0, 3.0);
    c.b(k) = c.a(k) * logu(-3.0, -0.05);
  }
  switch (kind) {
    case 1:  // user 0 inactive
      c.b(0) = c.a(0) * logu(0.0, 1.0);
      break;
    case 2:  // user 0 dominates, the rest barely active
      c.a(0) = logu(2.0, 3.0);
      c.b(0) = 0.0;
      for (int k = 1; k < K; ++k) {
        c.a(k) = logu(-2.0, -1.0);
        c.b(k) = 0.9 * c.a(k);
      }
      break;
    case 3:  // thin margins everywhere
      for (int k = 0; k < K; ++k) c.b(k) = c.a(k) * (0.5 + 0.45 * r.uniform());
      break;
    default:
      break;
  }
  return c;
}

inline SuiteResult power_allocation(const ValidationOptions& o) {
  SuiteResult res = make_result("power-alloc", 2);
  const Rng root = Rng(o.seed).substream(2);
  double worst_gap = -1e300;
  int inactive_cases = 0, saturated_cases = 0;
  const int n = 200;
  for (int i = 0; i < n; ++i) {
    Rng r = root.substream(static_cast<std::uint64_t>(i));
    const int K = i % 2 == 0 ? 2 : 3;
    const PowerCoefficients c = random_coefficients(K, (i / 2) % 4, r);
    const PowerAllocation alloc = allocate(c, 1e-10);
    const double solver = secrecy_objective(alloc.shares, c);
    const double grid = grid_max_objective(c);
    worst_gap = std::max(worst_gap, grid - solver);
    if (static_cast<Eigen::Index>(alloc.active_set.size()) < K) ++inactive_cases;
    if (alloc.shares.maxCoeff() >= 1.0 - 1e-12) ++saturated_cases;
  }
  res.passed = worst_gap <= 1e-6 && inactive_cases > 0 && saturated_cases > 0;
  res.detail = "max(grid - solver) = " + fmt(worst_gap) + " (bound 1e-6); inactive-user cases " +
               std::to_string(inactive_cases) + ", saturated cases " + std::to_string(saturated_cases);
  res.metrics = {{"max_grid_minus_solver", worst_gap},
                 {"instances", n},
                 {"inactive_cases", inactive_cases},
                 {"saturated_cases", saturated_cases}};
  return res;
}

// ---- 3 -------------------------------------------------------------------

inline SuiteResult beamformer(const ValidationOptions& o) {
  SuiteResult res = make_result("beamformer", 3);
  const Rng root = Rng(o.seed).substream(3);
  const int n = 100, nt = 8, probes = 10000;
  double worst_margin = 1e300, worst_residual = 0.0;
  for (int i = 0; i < n; ++i) {
    Rng r = root.substream(static_cast<std::uint64_t>(i));
    EffectiveLinks links;
    links.psiB = sample_rayleigh(1, nt, r);
    links.psiE = sample_rayleigh(1 + r.uniform_int(4), nt, r);
    const SecrecyMatrices m = build_secrecy_matrices(links, 0.05 + r.uniform(), 0.01 + r.uniform(),
                                                     0.01 + r.uniform(), r.uniform());
    const ComplexVector w = optimal_beamformer(m);
    const double q = rayleigh_quotient(m, w);
    double best = 0.0;
    for (int j = 0; j < probes; ++j) best = std::max(best, rayleigh_quotient(m, random_unit_vector(nt, r)));
    worst_margin = std::min(worst_margin, (q - best) / q);
    worst_residual = std::max(worst_residual, generalized_residual(m, w));
  }
  res.passed = worst_margin >= -1e-12 && worst_residual <= 1e-8;
  res.detail = "min (quotient - best random)/quotient = " + fmt(worst_margin) + ", max residual = " +
               fmt(worst_residual) + " (bound 1e-8)";
  res.metrics = {{"min_relative_margin", worst_margin}, {"max_residual", worst_residual}, {"instances", n}};
  return res;
}

// ---- 4 -------------------------------------------------------------------

/// Largest relative error between the analytic theta-gradient of the
/// surrogate and central differences. Both the solver's evaluator and the
/// reference functions are checked.
inline SuiteResult gradient(const ValidationOptions& o) {
  SuiteResult res = make_result("gradient", 4);
  const Rng root = Rng(o.seed).substream(4);
  const int n = 100;
  const double h = 1e-5;
  const double sign = o.fault == Fault::GradientSign ? -1.0 : 1.0;
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    Rng r = root.substream(static_cast<std::uint64_t>(i));
    const int K = 1 + i % 3;
    const int M = 1 + (i * 7) % 16;
    const PhaseProblem p = random_problem(K, M, r);
    const PhaseVector v = PhaseVector::random(M, r);
    const ComplexVector anchor = PhaseVector::random(M, r).values();
    const std::vector<cdouble> gammas = gamma_opt_all(anchor, p);
    SurrogateEvaluator eval(p, gammas, anchor);

    ComplexVector G_eval(M);
    eval.gradient(v.values(), G_eval);
    const ComplexVector G_ref = euclidean_gradient(v.values(), gammas, anchor, p);
    for (const ComplexVector* G : std::array<const ComplexVector*, 2>{&G_eval, &G_ref}) {
      const ComplexVector xi = sign * riemannian_gradient(v.values(), *G);
      RealVector analytic(M), numeric(M);
      const RealVector theta = v.angles();
      for (int m = 0; m < M; ++m) {
        analytic(m) = (std::conj(xi(m)) * cdouble(0.0, 1.0) * v(m)).real();
        RealVector tp = theta, tm = theta;
        tp(m) += h;
        tm(m) -= h;
        const ComplexVector vp = PhaseVector::from_angles(tp).values();
        const ComplexVector vm = PhaseVector::from_angles(tm).values();
        const double fp = G == &G_eval ? eval.value(vp) : surrogate_objective(vp, gammas, anchor, p);
        const double fm = G == &G_eval ? eval.value(vm) : surrogate_objective(vm, gammas, anchor, p);
        numeric(m) = (fp - fm) / (2.0 * h);
      }
      const double scale = std::max(analytic.norm(), 1e-12);
      worst = std::max(worst, (analytic - numeric).norm() / scale);
    }
  }
  res.passed = worst <= 1e-5;
  res.detail = "max relative error vs central differences = " + fmt(worst) + " (bound 1e-5)";
  res.metrics = {{"max_relative_error", worst}, {"instances", n}, {"fault_injected", o.fault != Fault::None}};
  return res;
}

// ---- 5 -------------------------------------------------------------------

inline SuiteResult quadratic_transform(const ValidationOptions& o) {
  SuiteResult res = make_result("quadratic-transform", 5);
  const Rng root = Rng(o.seed).substream(5);
  const int n = 1000;
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    Rng r = root.substream(static_cast<std::uint64_t>(i));
    const int M = 1 + r.uniform_int(16);
    const PhaseProblem p = random_problem(1 + r.uniform_int(3), M, r);
    const ComplexVector v = PhaseVector::random(M, r).values();
    const double exact = ratio_sum(v, p);
    const double transformed = transformed_objective(v, gamma_opt_all(v, p), p);
    worst = std::max(worst, std::abs(transformed - exact) / std::max(1.0, std::abs(exact)));
  }
  res.passed = worst <= 1e-10;
  res.detail = "max |transformed - sum F_k| (relative to max(1, sum F_k)) = " + fmt(worst) + " (bound 1e-10)";
  res.metrics = {{"max_error", worst}, {"points", n}};
  return res;
}

// ---- 6 -------------------------------------------------------------------

inline SuiteResult sca_bound_sweep(const ValidationOptions& o) {
  SuiteResult res = make_result("sca-bound", 6);
  const Rng root = Rng(o.seed).substream(6);
  const int n = 1000;
  double worst_excess = -1e300, worst_equality = 0.0;
  for (int i = 0; i < n; ++i) {
    Rng r = root.substream(static_cast<std::uint64_t>(i));
    const int M = 1 + r.uniform_int(16);
    PhaseProblem p;
    p.terms.push_back(random_term(M, 2, r));
    const ComplexVector v = PhaseVector::random(M, r).values();
    const ComplexVector vt = PhaseVector::random(M, r).values();
    const auto& t = p.terms.front();
    const double root_v = std::sqrt(1.0 + t.A * std::norm(v.dot(t.u)));
    const double root_vt = std::sqrt(1.0 + t.A * std::norm(vt.dot(t.u)));
    worst_excess = std::max(worst_excess, sca_bound(v, vt, p, 0) - root_v);
    worst_equality = std::max(worst_equality, std::abs(sca_bound(vt, vt, p, 0) - root_vt));
  }
  res.passed = worst_excess <= 1e-10 && worst_equality <= 1e-12;
  res.detail = "max(g - root) = " + fmt(worst_excess) + " (bound 1e-10), max |g(v_t) - root(v_t)| = " +
               fmt(worst_equality) + " (bound 1e-12)";
  res.metrics = {{"max_excess", worst_excess}, {"max_anchor_gap", worst_equality}, {"pairs", n}};
  return res;
}

// ---- 7 -------------------------------------------------------------------

/// K = 1, M = 2: solver result against the best point of a 64 x 64 phase grid.
/// Instances alternate between no eavesdropper leakage (B = 0) and B > 0.
inline SuiteResult rcg_grid(const ValidationOptions& o) {
  SuiteResult res = make_result("rcg-grid", 7);
  const Rng root = Rng(o.seed).substream(7);
  const int n = 50, grid = 64;
  SolverOptions opts;
  opts.rcg_outer_max = 200;
  double worst = -1e300;
  for (int i = 0; i < n; ++i) {
    Rng r = root.substream(static_cast<std::uint64_t>(i));
    PhaseProblem p;
    p.terms.push_back(random_term(2, 2, r));
    if (i % 2 == 0) p.terms.front().B = 0.0;
    double best = -1e300;
    RealVector theta(2);
    for (int a = 0; a < grid; ++a)
      for (int b = 0; b < grid; ++b) {
        theta << 2.0 * M_PI * a / grid, 2.0 * M_PI * b / grid;
        best = std::max(best, phase_sum_rate(PhaseVector::from_angles(theta).values(), p));
      }
    const RcgResult sol = rcg_optimize(p, PhaseVector::ones(2), opts, 1e-10, false);
    worst = std::max(worst, best - phase_sum_rate(sol.v.values(), p));
  }
  res.passed = worst <= 1e-3;
  res.detail = "max(grid best - solver) = " + fmt(worst) + " over " + std::to_string(n) + " instances (bound 1e-3)";
  res.metrics = {{"max_grid_minus_solver", worst}, {"instances", n}};
  return res;
}

// ---- 8 -------------------------------------------------------------------

inline SuiteResult ao_monotone(const ValidationOptions& o) {
  SuiteResult res = make_result("ao-monotone", 8);
  const ExperimentConfig base;
  const ValidatedConfig vcfg = validate_config(base.system);
  BetaCache cache;
  const double beta = cache.get(vcfg, base.path_loss, base.solver);
  const Rng root = Rng(o.seed).substream(8);
  const int n = 50;
  const double eps = vcfg->epsilon;
  double worst_drop = 0.0;
  int max_iterations = 0, not_converged = 0, resampled = 0, rejections = 0;
  for (int i = 0; i < n; ++i) {
    for (int attempt = 0;; ++attempt) {
      const Rng trial = root.substream(static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(attempt));
      Rng cr = trial.substream(0);
      const ChannelSet ch = generate_channel_set(vcfg, base.path_loss, cr);
      SchemeStart start = scheme_start(vcfg.get(), trial.substream(1));
      const AoResult r = alternating_optimize(vcfg, ch, beta, base.solver, start.v, start.W);
      if (r.failure) {
        if (r.failure->code() != ErrorCode::SingularSystem) throw *r.failure;
        ++resampled;
        continue;
      }
      for (size_t t = 1; t < r.outer_trace.size(); ++t)
        worst_drop = std::max(worst_drop, r.outer_trace[t - 1] - r.outer_trace[t]);
      max_iterations = std::max(max_iterations, r.iterations);
      not_converged += r.converged ? 0 : 1;
      rejections += r.outer_rejections;
      break;
    }
  }
  res.passed = worst_drop <= eps && max_iterations <= base.solver.ao_max_iterations && not_converged == 0;
  res.detail = "largest trace drop = " + fmt(worst_drop) + " (slack " + fmt(eps) + "), max iterations " +
               std::to_string(max_iterations) + "/" + std::to_string(base.solver.ao_max_iterations) +
               ", unconverged " + std::to_string(not_converged) + "/" + std::to_string(n);
  res.metrics = {{"largest_drop", worst_drop},
                 {"max_iterations", max_iterations},
                 {"unconverged", not_converged},
                 {"undone_iterations", rejections},
                 {"seeds", n}};
  return res;
}

// ---- 9 -------------------------------------------------------------------

/// M = 4, Ne = 2, K = 2, unit per-user power (Ptot = 2), unit-modulus symbols
/// and beta = sqrt(K / ||varpi||^2) for the instance. Fresh G and H_E per sample.
inline SuiteResult jamming_variance_check(const ValidationOptions& o) {
  SuiteResult res = make_result("jamming-variance", 9);
  SystemConfig c = default_system();
  c.ris_elements = 4;
  c.eve_antennas = 2;
  c.users = 2;
  c.total_power = 2.0;
  const ValidatedConfig vcfg = validate_config(c);
  const Rng root = Rng(o.seed).substream(9);
  const int samples = 100000;

  ChannelSet ch;
  PhaseVector v;
  BeamformerSet W;
  ComplexVector s(c.users);
  PrecoderResult pr;
  for (int attempt = 0;; ++attempt) {
    Rng r = root.substream(0, static_cast<std::uint64_t>(attempt));
    ch = generate_channel_set(vcfg, PathLossConfig{}, r);
    v = PhaseVector::random(c.ris_elements, r);
    W = random_beamformers(c.users, c.antennas_per_user, c.total_power, r);
    for (int k = 0; k < c.users; ++k) s(k) = r.unit_phase();
    try {
      pr = precode(ch, v, W, s);
      if (pr.condition_number < 1e3) break;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::SingularSystem) throw;
    }
  }
  const double beta = std::sqrt(c.users / pr.varpi.squaredNorm());
  const double M = c.ris_elements, P = W.powers(0);

  bool ok = true;
  double worst_z = 0.0, plus_z = 0.0;
  nlohmann::json users = nlohmann::json::array();
  for (int k = 0; k < c.users; ++k) {
    Rng mc = root.substream(1, static_cast<std::uint64_t>(k));
    const MonteCarloEstimate emp = jamming_variance_empirical(c, v, W, pr.varpi, s, beta, k, samples, mc);
    const double expansion = jamming_variance_closed_form(c, beta, pr.varpi(k).real(), CrossTermSign::Minus);
    const double plus = jamming_variance_closed_form(c, beta, pr.varpi(k).real(), CrossTermSign::Plus);
    const double z = (expansion - emp.mean) / emp.standard_error;
    const double zp = (plus - emp.mean) / emp.standard_error;

    Rng tr = root.substream(2, static_cast<std::uint64_t>(k));
    const ExpansionTerms terms = expansion_term_estimates(c, W, pr.varpi, s, k, samples, tr);
    const double za = (terms.a_sq.mean - M * P * c.users / (beta * beta)) / terms.a_sq.standard_error;
    const double zb = (terms.b_sq.mean - M * P) / terms.b_sq.standard_error;
    const double zr = (terms.ba_real.mean - M * P * pr.varpi(k).real()) / terms.ba_real.standard_error;
    const double zi = (terms.ba_imag.mean - M * P * pr.varpi(k).imag()) / terms.ba_imag.standard_error;
    for (double zz : {z, za, zb, zr, zi}) {
      ok = ok && std::abs(zz) <= 3.0;
      worst_z = std::max(worst_z, std::abs(zz));
    }
    plus_z = std::max(plus_z, std::abs(zp));
    users.push_back({{"user", k + 1},
                     {"empirical", emp.mean},
                     {"standard_error", emp.standard_error},
                     {"closed_form_minus", expansion},
                     {"closed_form_plus", plus},
                     {"z_minus", z},
                     {"z_plus", zp},
                     {"z_a_sq", za},
                     {"z_b_sq", zb},
                     {"z_ba_real", zr},
                     {"z_ba_imag", zi}});
  }
  res.passed = ok;
  res.detail = "max |z| over closed form (minus sign) and the three expectation terms = " + fmt(worst_z) +
               " (bound 3); plus sign |z| = " + fmt(plus_z);
  res.metrics = {{"users", users}, {"samples", samples}, {"beta", beta}, {"selected_sign", "minus"}};
  return res;
}

// ---- 10 ------------------------------------------------------------------

/// SNR 10 dB, Bob 2 at -20 dB relative gain, 400 paired seeds.
inline SuiteResult scheme_ordering(const ValidationOptions& o) {
  SuiteResult res = make_result("scheme-ordering", 10);
  ExperimentConfig base;
  base.path_loss.bob_gain_db = {0.0, -20.0};
  const int seeds = 400;
  const SecrecySweep sw = run_secrecy_sweep(base, all_schemes(), SweepAxis::Snr, {10.0}, seeds,
                                            Rng(o.seed).substream(10), o.jobs);
  const auto& r = sw.rate[0];  // BS, RIS, JOINT, AO
  double g_ris, g_joint, g_ao;
  const double z_ris = paired_z(r[1], r[0], &g_ris);
  const double z_joint = paired_z(r[2], r[1], &g_joint);
  const double z_ao = paired_z(r[3], r[2], &g_ao);
  const double z95 = 1.6448536269514722;
  res.passed = z_ris > z95 && z_joint > z95 && z_ao > z95;
  double means[4];
  for (int s = 0; s < 4; ++s) {
    double se;
    mean_and_stderr(r[static_cast<size_t>(s)], means[s], se);
  }
  res.detail = "Bob 2 at -20 dB, 400 seeds: means BS " + fmt(means[0]) + ", RIS " + fmt(means[1]) + ", JOINT " +
               fmt(means[2]) + ", AO " + fmt(means[3]) + "; paired z: RIS-BS " + fmt(z_ris) + ", JOINT-RIS " +
               fmt(z_joint) + ", AO-JOINT " + fmt(z_ao) + " (need > 1.645)";
  res.metrics = {{"means", {means[0], means[1], means[2], means[3]}},
                 {"gaps", {g_ris, g_joint, g_ao}},
                 {"z", {z_ris, z_joint, z_ao}},
                 {"seeds", seeds},
                 {"bob_gain_db", base.path_loss.bob_gain_db}};
  return res;
}

// ---- 11 ------------------------------------------------------------------

inline SuiteResult ris_size(const ValidationOptions& o) {
  SuiteResult res = make_result("ris-size", 11);
  ExperimentConfig base;
  base.system = with_snr_db(base.system, 10.0);
  const std::vector<double> grid{4, 8, 16, 32};
  const int seeds = 200;
  const SecrecySweep sw = run_secrecy_sweep(base, {Scheme::AO}, SweepAxis::RisElements, grid, seeds,
                                            Rng(o.seed).substream(11), o.jobs);
  std::vector<double> means;
  bool ok = true;
  for (size_t g = 0; g < grid.size(); ++g) {
    double m, se;
    mean_and_stderr(sw.rate[g][0], m, se);
    if (!means.empty()) ok = ok && m >= means.back();
    means.push_back(m);
  }
  res.passed = ok;
  res.detail = "AO mean at M = 4, 8, 16, 32: " + fmt(means[0]) + ", " + fmt(means[1]) + ", " + fmt(means[2]) + ", " +
               fmt(means[3]);
  res.metrics = {{"means", means}, {"seeds", seeds}};
  return res;
}

// ---- 12 ------------------------------------------------------------------

struct BerPlan {
  std::vector<double> snr_grid{-10.0, -5.0, 0.0, 5.0};
  double ordering_snr = 15.0;
  int ordering_symbols_per_trial = 1000;
  int trials = 1000;
};

inline SuiteResult ber_trends(const ValidationOptions& o, const BerPlan& plan = {}) {
  SuiteResult res = make_result("ber-trends", 12);
  const Rng root = Rng(o.seed).substream(12);
  BetaCache cache;
  const int bob2 = 1;

  // Ordering at the fixed SNR point, M = 16, both users at 0 dB.
  ExperimentConfig base;
  ExperimentConfig dense = base;
  dense.simulation.symbols_per_trial = plan.ordering_symbols_per_trial;
  std::vector<double> at_point;
  for (Scheme s : {Scheme::JOINT, Scheme::RIS, Scheme::BS}) {
    const BerSweep sw = run_ber_sweep(dense, s, {plan.ordering_snr}, plan.trials, root.substream(0), o.jobs, &cache);
    at_point.push_back(sw.mean_bob(0, bob2));
  }
  const bool ordering = at_point[0] < at_point[1] && at_point[1] < at_point[2];

  // M = 16 below M = 4 at every SNR point, every scheme.
  bool size_ok = true;
  nlohmann::json curves = nlohmann::json::object();
  for (Scheme s : {Scheme::BS, Scheme::RIS, Scheme::JOINT}) {
    std::vector<double> m4, m16;
    for (int M : {4, 16}) {
      ExperimentConfig e = base;
      e.system.ris_elements = M;
      const BerSweep sw = run_ber_sweep(e, s, plan.snr_grid, plan.trials, root.substream(1), o.jobs, &cache);
      for (size_t g = 0; g < plan.snr_grid.size(); ++g) (M == 4 ? m4 : m16).push_back(sw.mean_bob(g, bob2));
    }
    for (size_t g = 0; g < plan.snr_grid.size(); ++g) size_ok = size_ok && m16[g] < m4[g];
    curves[to_string(s)] = {{"M4", m4}, {"M16", m16}};
  }

  // AO with Bob 1 at 0 dB and Bob 2 at -20 dB.
  bool users_ok = true;
  nlohmann::json ao_curves = nlohmann::json::object();
  for (int M : {4, 16}) {
    ExperimentConfig e = base;
    e.system.ris_elements = M;
    e.path_loss.bob_gain_db = {0.0, -20.0};
    const BerSweep sw = run_ber_sweep(e, Scheme::AO, plan.snr_grid, plan.trials, root.substream(2), o.jobs, &cache);
    std::vector<double> b1, b2;
    for (size_t g = 0; g < plan.snr_grid.size(); ++g) {
      b1.push_back(sw.mean_bob(g, 0));
      b2.push_back(sw.mean_bob(g, 1));
      users_ok = users_ok && b1.back() < b2.back();
    }
    ao_curves["M" + std::to_string(M)] = {{"bob1", b1}, {"bob2", b2}};
  }

  res.passed = ordering && size_ok && users_ok;
  res.detail = "Bob 2 BER at " + fmt(plan.ordering_snr) + " dB: JOINT " + fmt(at_point[0]) + ", RIS " +
               fmt(at_point[1]) + ", BS " + fmt(at_point[2]) + (ordering ? " (ordered)" : " (NOT ordered)") +
               "; M=16 below M=4 everywhere: " + (size_ok ? "yes" : "no") + "; AO Bob 1 below Bob 2 everywhere: " +
               (users_ok ? "yes" : "no");
  res.metrics = {{"ordering_point", at_point},
                 {"snr_grid", plan.snr_grid},
                 {"size_curves", curves},
                 {"ao_curves", ao_curves},
                 {"trials", plan.trials}};
  return res;
}

// ---- 13 ------------------------------------------------------------------

inline SuiteResult complexity(const ValidationOptions& o) {
  SuiteResult res = make_result("complexity", 13);
  const std::vector<int> ms{8, 16, 32, 64};
  std::vector<double> x, t;
  nlohmann::json rows = nlohmann::json::array();
  for (int M : ms) {
    const BenchRow row = bench_inner_iteration(default_system(), M, 2, 0.5, Rng(o.seed).substream(13));
    x.push_back(M);
    t.push_back(row.seconds_per_iteration());
    rows.push_back({{"M", M},
                    {"seconds_per_iteration", row.seconds_per_iteration()},
                    {"inner_iterations", row.inner_iterations},
                    {"evaluations_per_iteration", row.evaluations_per_iteration}});
  }
  const double slope = fitted_exponent(x, t);
  res.passed = slope >= 1.6 && slope <= 2.4;
  res.detail = "fitted exponent of time per inner iteration vs M over {8,16,32,64} = " + fmt(slope) +
               " (band [1.6, 2.4])";
  res.metrics = {{"exponent", slope}, {"rows", rows}};
  return res;
}

}  // namespace validation

struct SuiteEntry {
  std::string name;
  int criterion;
  bool in_default_set;  // run by `validate` without --only
  std::function<SuiteResult(const ValidationOptions&)> run;
};

inline const std::vector<SuiteEntry>& validation_suites() {
  using namespace validation;
  static const std::vector<SuiteEntry> suites{
      {"zero-forcing", 1, true, zero_forcing},
      {"power-alloc", 2, true, power_allocation},
      {"beamformer", 3, true, beamformer},
      {"gradient", 4, true, gradient},
      {"quadratic-transform", 5, true, quadratic_transform},
      {"sca-bound", 6, true, sca_bound_sweep},
      {"rcg-grid", 7, true, rcg_grid},
      {"ao-monotone", 8, true, ao_monotone},
      {"jamming-variance", 9, true, jamming_variance_check},
      {"scheme-ordering", 10, false, scheme_ordering},
      {"ris-size", 11, false, ris_size},
      {"ber-trends", 12, false, [](const ValidationOptions& o) { return ber_trends(o); }},
      {"complexity", 13, true, complexity},
  };
  return suites;
}

/// Runs one suite, timing it and turning exceptions into failures.
inline SuiteResult run_suite(const SuiteEntry& s, const ValidationOptions& o) {
  const auto t0 = std::chrono::steady_clock::now();
  SuiteResult r;
  try {
    r = s.run(o);
  } catch (const std::exception& e) {
    r.name = s.name;
    r.criterion = s.criterion;
    r.passed = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

inline nlohmann::json to_json(const SuiteResult& r) {
  return {{"name", r.name},
          {"criterion", r.criterion},
          {"passed", r.passed},
          {"detail", r.detail},
          {"seconds", r.seconds},
          {"metrics", r.metrics}};
}

}  // namespace rissec
