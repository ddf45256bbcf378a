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

// RIS phase design by Riemannian conjugate gradient.
//
// With beamformers and powers fixed, user k's secrecy term is log2 F_k(v),
//
//   F_k(v) = (1 + A_k |v^H u_k|^2) / (1 + B_k v^H D_k v).
//
// The ratio is handled with the complex quadratic transform (auxiliary
// gamma_k, closed-form optimum), the concave-in-v numerator root with a
// first-order minorant g_k around the anchor v_t, and the resulting surrogate
//
//   S(v) = sum_k |gamma_k|^2 B_k v^H D_k v - 2 g_k(v) Re{gamma_k}
//
// is minimized on the product of circles. Outer iterations refresh gamma and
// the anchor.
//
// Convention: Theta = diag(v). Then hB^H Theta a = v^T (conj(hB) .* a), so
// u_k = hB_k .* conj(a_k) gives |v^H u_k| = |hB_k^H Theta a_k|, and
// D_k = diag(conj(a_k)) H_E^H H_E diag(a_k) gives v^H D_k v = ||H_E Theta a_k||^2,
// with a_k = G_k w_k.

#pragma once

#include "rissec/channel.hpp"
#include "rissec/config.hpp"
#include "rissec/manifold.hpp"
#include "rissec/state.hpp"
#include "rissec/types.hpp"

#include <cmath>
#include <optional>
#include <ostream>
#include <vector>

namespace rissec {

struct PhaseTerm {
  double A = 0.0;
  double B = 0.0;
  ComplexVector u;  // M
  ComplexMatrix D;  // M x M, Hermitian PSD
};

struct PhaseProblem {
  std::vector<PhaseTerm> terms;

  int users() const { return static_cast<int>(terms.size()); }
  int ris_elements() const { return terms.empty() ? 0 : static_cast<int>(terms.front().u.size()); }
};

namespace detail {

/// Re{v^H D v}, one pass over the columns of D.
inline double hermitian_form(const ComplexMatrix& D, const ComplexVector& v) {
  const Eigen::Index n = v.size();
  const double* x = reinterpret_cast<const double*>(v.data());
  double total = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double* col = reinterpret_cast<const double*>(D.data()) + 2 * n * j;
    double sr = 0.0;
    double si = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      sr += x[2 * i] * col[2 * i] + x[2 * i + 1] * col[2 * i + 1];
      si += x[2 * i] * col[2 * i + 1] - x[2 * i + 1] * col[2 * i];
    }
    total += x[2 * j] * sr - x[2 * j + 1] * si;
  }
  return total;
}

/// out += c D v, column by column.
inline void add_scaled_product(double c, const ComplexMatrix& D, const ComplexVector& v, ComplexVector& out) {
  const Eigen::Index n = v.size();
  double* y = reinterpret_cast<double*>(out.data());
  for (Eigen::Index j = 0; j < n; ++j) {
    const double* col = reinterpret_cast<const double*>(D.data()) + 2 * n * j;
    const double vr = c * v(j).real();
    const double vi = c * v(j).imag();
    for (Eigen::Index i = 0; i < n; ++i) {
      y[2 * i] += col[2 * i] * vr - col[2 * i + 1] * vi;
      y[2 * i + 1] += col[2 * i] * vi + col[2 * i + 1] * vr;
    }
  }
}

}  // namespace detail

inline PhaseProblem build_phase_problem(const ChannelSet& ch, const BeamformerSet& W, double beta,
                                        const SystemConfig& cfg, const RealVector& jamming) {
  require(W.users() == ch.users() && jamming.size() == ch.users(), ErrorCode::DimensionMismatch,
          "phase problem inputs disagree on K");
  const int K = ch.users();
  const ComplexMatrix a = transmit_footprints(ch, W.w);
  const ComplexMatrix eve_gram = ch.HE.adjoint() * ch.HE;
  PhaseProblem p;
  p.terms.resize(static_cast<size_t>(K));
  for (int k = 0; k < K; ++k) {
    auto& t = p.terms[static_cast<size_t>(k)];
    const double common = W.powers(k) * beta * beta / K;
    t.A = common / cfg.noise_var_bob;
    t.B = common / (cfg.noise_var_eve + jamming(k));
    t.u = ch.hB[static_cast<size_t>(k)].cwiseProduct(a.col(k).conjugate());
    t.D = a.col(k).conjugate().asDiagonal() * eve_gram * a.col(k).asDiagonal();
  }
  return p;
}

struct RatioParts {
  double numerator;    // 1 + A |v^H u|^2
  double denominator;  // 1 + B v^H D v
};

inline RatioParts ratio_parts(const ComplexVector& v, const PhaseTerm& t) {
  return {1.0 + t.A * std::norm(v.dot(t.u)), 1.0 + t.B * detail::hermitian_form(t.D, v)};
}

/// sum_k log2 F_k(v), without the per-user clamp.
inline double phase_sum_rate(const ComplexVector& v, const PhaseProblem& p) {
  double r = 0.0;
  for (const auto& t : p.terms) {
    const RatioParts q = ratio_parts(v, t);
    r += std::log2(q.numerator / q.denominator);
  }
  return r;
}

inline double ratio_sum(const ComplexVector& v, const PhaseProblem& p) {
  double r = 0.0;
  for (const auto& t : p.terms) {
    const RatioParts q = ratio_parts(v, t);
    r += q.numerator / q.denominator;
  }
  return r;
}

inline cdouble gamma_opt(const ComplexVector& v, const PhaseProblem& p, int k) {
  const RatioParts q = ratio_parts(v, p.terms[static_cast<size_t>(k)]);
  return {std::sqrt(q.numerator) / q.denominator, 0.0};
}

inline std::vector<cdouble> gamma_opt_all(const ComplexVector& v, const PhaseProblem& p) {
  std::vector<cdouble> g;
  for (int k = 0; k < p.users(); ++k) g.push_back(gamma_opt(v, p, k));
  return g;
}

inline double transformed_objective(const ComplexVector& v, const std::vector<cdouble>& gammas,
                                    const PhaseProblem& p) {
  double f = 0.0;
  for (size_t k = 0; k < p.terms.size(); ++k) {
    const RatioParts q = ratio_parts(v, p.terms[k]);
    f += 2.0 * std::sqrt(q.numerator) * gammas[k].real() - std::norm(gammas[k]) * q.denominator;
  }
  return f;
}

/// First-order minorant of sqrt(1 + A |v^H u|^2) around `anchor`:
///   s_t + (A / s_t) Re{(anchor^H u)(u^H (v - anchor))},  s_t = sqrt(1 + A |anchor^H u|^2).
/// The root is convex in v (norm of an affine map), so this lower-bounds it.
inline double sca_bound(const ComplexVector& v, const ComplexVector& anchor, const PhaseProblem& p, int k) {
  const auto& t = p.terms[static_cast<size_t>(k)];
  const cdouble anchor_u = anchor.dot(t.u);  // anchor^H u
  const double st = std::sqrt(1.0 + t.A * std::norm(anchor_u));
  const cdouble step = t.u.dot(v - anchor);  // u^H (v - anchor)
  return st + (t.A / st) * (anchor_u * step).real();
}

inline double surrogate_objective(const ComplexVector& v, const std::vector<cdouble>& gammas,
                                  const ComplexVector& anchor, const PhaseProblem& p) {
  double s = 0.0;
  for (int k = 0; k < p.users(); ++k) {
    const auto& t = p.terms[static_cast<size_t>(k)];
    const cdouble g = gammas[static_cast<size_t>(k)];
    s += std::norm(g) * t.B * v.dot(t.D * v).real() - 2.0 * sca_bound(v, anchor, p, k) * g.real();
  }
  return s;
}

/// G = 2 (sum_k |gamma_k|^2 B_k D_k v - sum_k Re{gamma_k} d_k),
/// d_k = (A_k / s_t) (u_k^H anchor) u_k; satisfies dS = Re{G^H dv}.
inline ComplexVector euclidean_gradient(const ComplexVector& v, const std::vector<cdouble>& gammas,
                                        const ComplexVector& anchor, const PhaseProblem& p) {
  ComplexVector G = ComplexVector::Zero(v.size());
  for (int k = 0; k < p.users(); ++k) {
    const auto& t = p.terms[static_cast<size_t>(k)];
    const cdouble g = gammas[static_cast<size_t>(k)];
    const double st = std::sqrt(1.0 + t.A * std::norm(anchor.dot(t.u)));
    const cdouble u_anchor = t.u.dot(anchor);  // u^H anchor
    G.noalias() += (2.0 * std::norm(g) * t.B) * (t.D * v);
    G -= (2.0 * g.real() * t.A / st * u_anchor) * t.u;
  }
  return G;
}

inline ComplexVector riemannian_gradient(const ComplexVector& v, const ComplexVector& euclidean) {
  return project_tangent(v, euclidean);
}

struct RcgTraceRow {
  int outer = 0;
  int inner = 0;
  double surrogate = 0.0;
  double sum_rate = 0.0;
  double grad_norm = 0.0;
  double step = 0.0;
};

struct RcgResult {
  PhaseVector v;
  std::vector<double> outer_objective;  // phase_sum_rate after each accepted outer iteration (entry 0: start)
  std::vector<RcgTraceRow> trace;       // one row per accepted inner step
  int outer_iterations = 0;
  int inner_iterations = 0;
  int line_search_stalls = 0;
  long surrogate_evaluations = 0;
  bool rejected_outer_step = false;
};


/// Surrogate value and gradient for one (gamma, anchor) pair, evaluated into
/// preallocated buffers. Per call the cost is one M x M product per user.
class SurrogateEvaluator {
 public:
  SurrogateEvaluator(const PhaseProblem& p, const std::vector<cdouble>& gammas, const ComplexVector& anchor)
      : p_(p), quad_(p.terms.size()), lin_(p.terms.size()) {
    constant_ = 0.0;
    for (size_t k = 0; k < p.terms.size(); ++k) {
      const auto& t = p.terms[k];
      const cdouble anchor_u = anchor.dot(t.u);
      const double st = std::sqrt(1.0 + t.A * std::norm(anchor_u));
      quad_[k] = std::norm(gammas[k]) * t.B;
      // Re{gamma_k} (A/s_t) (anchor^H u); the gradient uses its conjugate.
      lin_[k] = gammas[k].real() * t.A / st * anchor_u;
      constant_ -= 2.0 * gammas[k].real() * (st - t.A / st * std::norm(anchor_u));
    }
  }

  double value(const ComplexVector& v) {
    double s = constant_;
    for (size_t k = 0; k < p_.terms.size(); ++k) {
      const auto& t = p_.terms[k];
      if (quad_[k] != 0.0) s += quad_[k] * detail::hermitian_form(t.D, v);
      s -= 2.0 * (lin_[k] * t.u.dot(v)).real();
    }
    return s;
  }

  /// Euclidean gradient into `out` (no allocation when `out` is sized).
  void gradient(const ComplexVector& v, ComplexVector& out) {
    out.setZero();
    for (size_t k = 0; k < p_.terms.size(); ++k) {
      const auto& t = p_.terms[k];
      if (quad_[k] != 0.0) detail::add_scaled_product(2.0 * quad_[k], t.D, v, out);
      out -= (2.0 * std::conj(lin_[k])) * t.u;
    }
  }

 private:
  const PhaseProblem& p_;
  std::vector<double> quad_;
  std::vector<cdouble> lin_;
  double constant_ = 0.0;
};

namespace detail {

inline void project_tangent_into(const ComplexVector& v, ComplexVector& x) {
  for (Eigen::Index m = 0; m < x.size(); ++m) x(m) -= (x(m) * std::conj(v(m))).real() * v(m);
}

inline void retract_into(const ComplexVector& v, const ComplexVector& step, double alpha, ComplexVector& out) {
  for (Eigen::Index m = 0; m < v.size(); ++m) {
    const cdouble z = v(m) + alpha * step(m);
    const double r2 = std::norm(z);
    out(m) = r2 > 0.0 ? z * (1.0 / std::sqrt(r2)) : v(m);
  }
}

}  // namespace detail

/// Algorithm: outer loop refreshes gamma and the SCA anchor; inner loop runs
/// PRP+ conjugate gradient with Armijo backtracking on the surrogate.
/// Terminates when the sum rate moves by less than `epsilon` or after
/// opts.rcg_outer_max refreshes. An outer step that lowers the sum rate is
/// discarded and the solver stops at the previous point. With `record_trace`
/// off the per-step sum rate is not evaluated.
inline RcgResult rcg_optimize(const PhaseProblem& p, const PhaseVector& v0, const SolverOptions& opts, double epsilon,
                              bool record_trace = true) {
  require(v0.size() == p.ris_elements() || p.users() == 0, ErrorCode::DimensionMismatch, "v0 length != M");
  const Eigen::Index M = v0.size();
  RcgResult res;
  res.v = v0;
  double rate = phase_sum_rate(v0.values(), p);
  res.outer_objective.push_back(rate);

  ComplexVector v(M), trial(M), xi(M), xi_new(M), eta(M);
  for (int t = 0; t < opts.rcg_outer_max; ++t) {
    v = res.v.values();
    SurrogateEvaluator eval(p, gamma_opt_all(v, p), v);
    double S = eval.value(v);
    eval.gradient(v, xi);
    detail::project_tangent_into(v, xi);
    eta = -xi;
    int j = 0;
    while (xi.norm() > opts.grad_tol && j < opts.rcg_inner_max) {
      bool steepest = false;
      double slope = real_inner(xi, eta);
      if (!(slope < 0.0)) {
        eta = -xi;
        slope = -xi.squaredNorm();
        steepest = true;
      }
      bool accepted = false;
      double S_new = S;
      double alpha = opts.armijo_initial_step;
      for (;;) {
        alpha = opts.armijo_initial_step;
        for (int l = 0; l < opts.armijo_max_trials; ++l) {
          detail::retract_into(v, eta, alpha, trial);
          const double S_trial = eval.value(trial);
          ++res.surrogate_evaluations;
          if (S_trial <= S + opts.armijo_c * alpha * slope) {
            accepted = true;
            S_new = S_trial;
            break;
          }
          alpha *= opts.armijo_contraction;
        }
        if (accepted || steepest) break;
        // Stall on a conjugate direction: retry once along -xi.
        ++res.line_search_stalls;
        eta = -xi;
        slope = -xi.squaredNorm();
        steepest = true;
      }
      if (!accepted) {
        ++res.line_search_stalls;
        break;
      }

      eval.gradient(trial, xi_new);
      detail::project_tangent_into(trial, xi_new);
      const double prp = std::max(0.0, (xi_new.squaredNorm() - real_inner(xi_new, xi)) / xi.squaredNorm());
      // eta <- -xi_new + prp * transport(eta) at the new point
      detail::project_tangent_into(trial, eta);
      eta *= prp;
      eta -= xi_new;

      v.swap(trial);
      xi.swap(xi_new);
      S = S_new;
      ++j;
      ++res.inner_iterations;
      if (record_trace) res.trace.push_back({t, j, S, phase_sum_rate(v, p), xi.norm(), alpha});
    }

    ++res.outer_iterations;
    const double new_rate = phase_sum_rate(v, p);
    if (new_rate < rate) {
      res.rejected_outer_step = true;
      break;
    }
    res.v = PhaseVector::normalized(v);
    res.outer_objective.push_back(new_rate);
    const bool done = std::abs(new_rate - rate) < epsilon;
    rate = new_rate;
    if (done) break;
  }
  return res;
}

/// CSV trace: outer,inner,surrogate,sum_rate,grad_norm,step
inline void write_rcg_trace_csv(std::ostream& out, const RcgResult& r) {
  out << "outer,inner,surrogate,sum_rate,grad_norm,step\n";
  out.precision(17);
  for (const auto& row : r.trace)
    out << row.outer << ',' << row.inner << ',' << row.surrogate << ',' << row.sum_rate << ',' << row.grad_norm << ','
        << row.step << '\n';
}

}  // namespace rissec
