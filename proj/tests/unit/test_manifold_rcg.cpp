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

namespace {

PhaseProblem problem_from(const Instance& in, double beta, const RealVector& jam) {
  return build_phase_problem(in.ch, in.W, beta, in.cfg.get(), jam);
}

}  // namespace

TEST_CASE("phase problem construction") {
  Instance in = random_instance(SystemConfig{}, 1);
  RealVector jam(2);
  jam << 0.5, 0.25;
  const PhaseProblem p = problem_from(in, 0.8, jam);
  REQUIRE(p.users() == 2);
  REQUIRE(p.ris_elements() == 16);

  // Numerator and denominator agree with the rate expressions.
  const SecrecyReport r = secrecy_report(in.ch, in.v, in.W, 0.8, jam, in.cfg.get());
  for (int k = 0; k < 2; ++k) {
    const RatioParts q = ratio_parts(in.v.values(), p.terms[static_cast<size_t>(k)]);
    CHECK_THAT(std::log2(q.numerator), WithinRel(r.rate_bob(k), 1e-12));
    CHECK_THAT(std::log2(q.denominator), WithinRel(r.rate_eve(k), 1e-12));
  }

  in.ch.HE.setZero();
  for (const auto& t : problem_from(in, 0.8, jam).terms) CHECK(t.D.isZero());

  SystemConfig one = with_users(SystemConfig{}, 1);
  one.ris_elements = 1;
  const Instance s = random_instance(one, 2);
  const PhaseProblem ps = problem_from(s, 1.0, RealVector::Zero(1));
  const cdouble expected = s.ch.hB[0](0) * std::conj((s.ch.G_block(0) * s.W.w[0])(0));
  CHECK(std::abs(ps.terms[0].u(0) - expected) <= 1e-14);
  // hB^H Theta a equals v^H u.
  const cdouble direct = std::conj(s.ch.hB[0](0)) * s.v(0) * (s.ch.G_block(0) * s.W.w[0])(0);
  CHECK(std::abs(std::norm(s.v.values().dot(ps.terms[0].u)) - std::norm(direct)) <= 1e-12);
}

TEST_CASE("optimal auxiliary variable") {
  PhaseProblem p;
  PhaseTerm t;
  t.A = 0.0;
  t.B = 0.0;
  t.u = ComplexVector::Zero(3);
  t.D = ComplexMatrix::Zero(3, 3);
  p.terms.push_back(t);
  const ComplexVector v = PhaseVector::ones(3).values();
  CHECK(gamma_opt(v, p, 0) == cdouble(1.0, 0.0));
  CHECK(transformed_objective(v, {cdouble(1.0, 0.0)}, p) == 1.0);
  CHECK(transformed_objective(v, {cdouble(0.0, 0.0)}, p) == 0.0);

  Rng r(3);
  PhaseProblem q = validation::random_problem(1, 6, r);
  q.terms[0].B = 0.0;
  const ComplexVector w = PhaseVector::random(6, r).values();
  CHECK_THAT(gamma_opt(w, q, 0).real(), WithinRel(std::sqrt(1.0 + q.terms[0].A * std::norm(w.dot(q.terms[0].u))), 1e-14));

  for (int i = 0; i < 50; ++i) {
    const PhaseProblem pr = validation::random_problem(1 + i % 3, 8, r);
    const ComplexVector x = PhaseVector::random(8, r).values();
    const auto g = gamma_opt_all(x, pr);
    const double best = transformed_objective(x, g, pr);
    CHECK_THAT(best, WithinRel(ratio_sum(x, pr), 1e-12));
    for (int k = 0; k < pr.users(); ++k)
      for (cdouble d : {cdouble(1e-3, 0), cdouble(-1e-3, 0), cdouble(0, 1e-3), cdouble(0, -1e-3)}) {
        auto h = g;
        h[static_cast<size_t>(k)] += d;
        CHECK(transformed_objective(x, h, pr) < best);
      }
  }
}

TEST_CASE("SCA minorant") {
  Rng r(4);
  PhaseProblem p = validation::random_problem(1, 5, r);
  const ComplexVector v = PhaseVector::random(5, r).values();
  const ComplexVector a = PhaseVector::random(5, r).values();
  CHECK(sca_bound(a, a, p, 0) == std::sqrt(1.0 + p.terms[0].A * std::norm(a.dot(p.terms[0].u))));
  p.terms[0].A = 0.0;
  CHECK(sca_bound(v, a, p, 0) == 1.0);
}

TEST_CASE("surrogate and gradient special cases") {
  Rng r(5);
  PhaseProblem p = validation::random_problem(2, 6, r);
  const ComplexVector v = PhaseVector::random(6, r).values();
  const ComplexVector a = PhaseVector::random(6, r).values();
  const std::vector<cdouble> zero(2, cdouble(0.0, 0.0));
  CHECK(surrogate_objective(v, zero, a, p) == 0.0);
  CHECK(euclidean_gradient(v, zero, a, p).isZero());

  // At the anchor, surrogate + transformed objective = -sum |gamma|^2.
  const auto g = gamma_opt_all(a, p);
  double gsq = 0.0;
  for (auto x : g) gsq += std::norm(x);
  CHECK_THAT(surrogate_objective(a, g, a, p) + transformed_objective(a, g, p), WithinAbs(-gsq, 1e-10));

  PhaseProblem flat = p;
  for (auto& t : flat.terms) t.D.setZero();
  const std::vector<cdouble> one{cdouble(0.7, 0.0)};
  flat.terms.resize(1);
  const ComplexVector G = euclidean_gradient(v, one, a, flat);
  const auto& t = flat.terms[0];
  const double st = std::sqrt(1.0 + t.A * std::norm(a.dot(t.u)));
  const ComplexVector d = (t.A / st * t.u.dot(a)) * t.u;
  CHECK((G + 2.0 * 0.7 * d).norm() <= 1e-12 * G.norm());
  // Linear surrogate with D = 0: value at v is -2 Re{gamma} g(v).
  CHECK_THAT(surrogate_objective(v, one, a, flat), WithinRel(-2.0 * 0.7 * sca_bound(v, a, flat, 0), 1e-12));
}

TEST_CASE("solver evaluator agrees with the reference surrogate") {
  Rng r(6);
  for (int i = 0; i < 20; ++i) {
    const int M = 1 + i;
    const PhaseProblem p = validation::random_problem(1 + i % 3, M, r);
    const ComplexVector a = PhaseVector::random(M, r).values();
    const ComplexVector v = PhaseVector::random(M, r).values();
    const auto g = gamma_opt_all(a, p);
    SurrogateEvaluator eval(p, g, a);
    CHECK_THAT(eval.value(v), WithinAbs(surrogate_objective(v, g, a, p), 1e-10 * (1.0 + std::abs(eval.value(v)))));
    ComplexVector G(M);
    eval.gradient(v, G);
    const ComplexVector ref = euclidean_gradient(v, g, a, p);
    CHECK((G - ref).norm() <= 1e-12 * (1.0 + ref.norm()));
  }
}

TEST_CASE("manifold operations") {
  Rng r(7);
  for (int i = 0; i < 100; ++i) {
    const PhaseVector v = PhaseVector::random(12, r);
    CHECK(project_tangent(v, v.values()).norm() <= 1e-15);
    CHECK((retract(v, ComplexVector::Zero(12)).values() - v.values()).norm() <= 1e-15);
    const ComplexVector chi = project_tangent(v, sample_rayleigh(12, 1, r).col(0));
    CHECK(tangency_error(v.values(), chi) <= 1e-15);
    const PhaseVector n = retract(v, chi);
    CHECK(n.max_modulus_error() <= 1e-14);
    CHECK(tangency_error(n.values(), transport(v, n, chi)) <= 1e-12);
  }
  // A step that lands on the origin keeps the old entry.
  const PhaseVector one = PhaseVector::ones(1);
  CHECK(retract(one, ComplexVector::Constant(1, -1.0)).values()(0) == cdouble(1.0, 0.0));
  CHECK(throws_code([] { PhaseVector(ComplexVector::Constant(2, 1.5)); }, ErrorCode::NotUnitModulus));
}

TEST_CASE("phase solver on a flat problem leaves v0 alone") {
  PhaseProblem p;
  PhaseTerm t;
  t.A = t.B = 1.0;
  t.u = ComplexVector::Zero(4);
  t.D = ComplexMatrix::Zero(4, 4);
  p.terms = {t, t};
  Rng r(8);
  const PhaseVector v0 = PhaseVector::random(4, r);
  const RcgResult res = rcg_optimize(p, v0, SolverOptions{}, 1e-6);
  CHECK(res.v.values() == v0.values());
  for (double x : res.outer_objective) CHECK(x == res.outer_objective.front());
}

TEST_CASE("phase solver reaches the grid optimum and warm-starts quickly") {
  Rng r(9);
  SolverOptions o;
  o.rcg_outer_max = 200;
  for (int i = 0; i < 10; ++i) {
    PhaseProblem p;
    p.terms.push_back(validation::random_term(2, 2, r));
    double best = -1e300;
    RealVector theta(2), arg(2);
    for (int a = 0; a < 128; ++a)
      for (int b = 0; b < 128; ++b) {
        theta << 2 * M_PI * a / 128, 2 * M_PI * b / 128;
        const double f = phase_sum_rate(PhaseVector::from_angles(theta).values(), p);
        if (f > best) {
          best = f;
          arg = theta;
        }
      }
    const RcgResult cold = rcg_optimize(p, PhaseVector::ones(2), o, 1e-10);
    CHECK(phase_sum_rate(cold.v.values(), p) >= best - 1e-3);
    const RcgResult warm = rcg_optimize(p, cold.v, o, 1e-6);
    CHECK(warm.outer_iterations <= 2);
  }
}

TEST_CASE("phase solver never lowers the sum rate and records a trace") {
  Rng r(10);
  for (int i = 0; i < 20; ++i) {
    const PhaseProblem p = validation::random_problem(2, 16, r);
    const PhaseVector v0 = PhaseVector::random(16, r);
    const RcgResult res = rcg_optimize(p, v0, SolverOptions{}, 1e-6);
    for (size_t t = 1; t < res.outer_objective.size(); ++t)
      CHECK(res.outer_objective[t] >= res.outer_objective[t - 1]);
    CHECK(phase_sum_rate(res.v.values(), p) >= phase_sum_rate(v0.values(), p));
    CHECK(res.v.max_modulus_error() <= 1e-12);
    CHECK(static_cast<int>(res.trace.size()) == res.inner_iterations);
  }
  std::ostringstream csv;
  write_rcg_trace_csv(csv, rcg_optimize(validation::random_problem(1, 4, r), PhaseVector::ones(4), SolverOptions{}, 1e-6));
  CHECK(csv.str().rfind("outer,inner,surrogate,sum_rate,grad_norm,step\n", 0) == 0);
}

TEST_CASE("inner iteration count does not depend on whether a trace is recorded") {
  Rng r(11);
  const PhaseProblem p = validation::random_problem(2, 8, r);
  const PhaseVector v0 = PhaseVector::random(8, r);
  const RcgResult a = rcg_optimize(p, v0, SolverOptions{}, 1e-6, true);
  const RcgResult b = rcg_optimize(p, v0, SolverOptions{}, 1e-6, false);
  CHECK(a.v.values() == b.v.values());
  CHECK(a.inner_iterations == b.inner_iterations);
  CHECK(b.trace.empty());
}

TEST_CASE("gradient-sign fault is caught by the gradient suite") {
  ValidationOptions o;
  o.fault = Fault::GradientSign;
  CHECK_FALSE(validation::gradient(o).passed);
  CHECK(validation::gradient(ValidationOptions{}).passed);
}
