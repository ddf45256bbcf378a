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

PowerCoefficients coeffs(std::initializer_list<double> a, std::initializer_list<double> b) {
  PowerCoefficients c;
  c.a = Eigen::Map<const RealVector>(a.begin(), static_cast<Eigen::Index>(a.size()));
  c.b = Eigen::Map<const RealVector>(b.begin(), static_cast<Eigen::Index>(b.size()));
  return c;
}

}  // namespace

TEST_CASE("power coefficients") {
  Instance in = random_instance(SystemConfig{}, 1);
  RealVector jam(2);
  jam << 0.2, 0.4;
  const PowerCoefficients c = compute_coefficients(in.ch, in.v, in.W.w, 0.7, in.cfg.get(), jam);

  for (int k = 0; k < 2; ++k) {
    const EffectiveLinks l = effective_links(in.ch, in.v, 0.7, k);
    const ComplexVector& w = in.W.w[static_cast<size_t>(k)];
    CHECK_THAT(c.a(k), WithinRel(std::norm((l.psiB * w)(0)) / in.cfg->noise_var_bob, 1e-12));
    CHECK_THAT(c.b(k), WithinRel((l.psiE * w).squaredNorm() / (in.cfg->noise_var_eve + jam(k)), 1e-12));
  }

  SystemConfig doubled = in.cfg.get();
  doubled.total_power = 3.0;
  const PowerCoefficients c3 = compute_coefficients(in.ch, in.v, in.W.w, 0.7, doubled, jam);
  CHECK((c3.a - 3.0 * c.a).norm() <= 1e-12 * c.a.norm());
  CHECK((c3.b - 3.0 * c.b).norm() <= 1e-12 * c.b.norm());

  in.ch.HE.setZero();
  CHECK(compute_coefficients(in.ch, in.v, in.W.w, 0.7, in.cfg.get(), jam).b.isZero());
}

TEST_CASE("interior share closed-form cases") {
  CHECK_THAT(interior_share(1.0 / kLn2, 1.0, 0.0), WithinAbs(0.0, 1e-15));
  CHECK_THAT(interior_share(1.0 / kLn2, 2.0, 0.0), WithinAbs(0.5, 1e-15));
  const double p = interior_share(1.0 / (2.0 * kLn2), 2.0, 1.0);
  CHECK_THAT(p, WithinAbs((-3.0 + std::sqrt(17.0)) / 4.0, 1e-14));
  CHECK_THAT((1.0 + 2.0 * p) * (1.0 + p), WithinAbs(2.0, 1e-13));
  CHECK(throws_code([] { interior_share(1.0, 1.0, 1.0); }, ErrorCode::InvalidCoefficients));
}

TEST_CASE("water-level function") {
  CHECK(phi(1.0, coeffs({1.0, 2.0}, {3.0, 2.0})) == 0.0);
  CHECK(phi(1e12, coeffs({5.0, 2.0}, {1.0, 0.5})) == 0.0);
  Rng r(3);
  for (int i = 0; i < 50; ++i) {
    const PowerCoefficients c = validation::random_coefficients(3, i % 4, r);
    double prev = phi(1e-8, c);
    for (double mu = 1e-7; mu < 1e8; mu *= 1.7) {
      const double f = phi(mu, c);
      CHECK(f <= prev + 1e-15);
      prev = f;
    }
  }
}

TEST_CASE("allocation examples") {
  const PowerAllocation sym = allocate(coeffs({4.0, 4.0}, {1.0, 1.0}), 1e-12);
  CHECK_THAT(sym.shares(0), WithinAbs(0.5, 1e-9));
  CHECK_THAT(sym.shares(1), WithinAbs(0.5, 1e-9));

  const PowerAllocation inactive = allocate(coeffs({4.0, 1.0}, {1.0, 2.0}), 1e-12);
  CHECK(inactive.shares(0) == 1.0);
  CHECK(inactive.shares(1) == 0.0);
  CHECK(inactive.active_set == std::vector<int>{0});

  const PowerAllocation tie = allocate(coeffs({2.0, 3.0, 1.0}, {2.0, 1.0, 0.5}), 1e-12);
  CHECK(tie.shares(0) == 0.0);

  const PowerAllocation none = allocate(coeffs({1.0, 1.0}, {2.0, 1.0}), 1e-12);
  CHECK(none.degenerate_all_inactive);
  CHECK(none.shares(0) == 0.5);
}

TEST_CASE("allocation matches a fine grid search") {
  const PowerCoefficients c = coeffs({8.0, 3.0}, {1.0, 0.5});
  const PowerAllocation alloc = allocate(c, 1e-12);
  double best = -1e300, best_p = 0.0;
  for (int i = 0; i <= 100000; ++i) {
    const double p = i * 1e-5;
    RealVector s(2);
    s << p, 1.0 - p;
    const double f = secrecy_objective(s, c);
    if (f > best) {
      best = f;
      best_p = p;
    }
  }
  CHECK(std::abs(alloc.shares(0) - best_p) <= 1e-3);
  CHECK(secrecy_objective(alloc.shares, c) >= best - 1e-6);
  CHECK_THAT(alloc.shares.sum(), WithinAbs(1.0, 1e-7));
}

TEST_CASE("allocation is never beaten by random feasible shares") {
  Rng r(5);
  for (int i = 0; i < 200; ++i) {
    const int K = 2 + i % 3;
    const PowerCoefficients c = validation::random_coefficients(K, i % 4, r);
    const PowerAllocation alloc = allocate(c, 1e-10);
    CHECK((alloc.shares.array() >= 0.0).all());
    CHECK(alloc.shares.sum() <= 1.0 + 1e-7);
    const double f = secrecy_objective(alloc.shares, c);
    for (int j = 0; j < 50; ++j) {
      RealVector s(K);
      for (int k = 0; k < K; ++k) s(k) = -std::log(r.uniform() + 1e-300);
      s /= s.sum();
      CHECK(secrecy_objective(s, c) <= f + 1e-8);
    }
  }
}

// ---- beamformer ------------------------------------------------------------

TEST_CASE("secrecy matrix construction") {
  EffectiveLinks l;
  l.psiB = Eigen::RowVectorXcd::Zero(4);
  l.psiB(0) = 1.0;
  l.psiE = ComplexMatrix::Zero(2, 4);
  const SecrecyMatrices zero = build_secrecy_matrices(l, 0.0, 0.1, 0.1, 0.0);
  CHECK(zero.XB.isIdentity());
  CHECK(zero.XE.isIdentity());

  const SecrecyMatrices m = build_secrecy_matrices(l, 0.3, 0.1, 0.1, 0.0);
  RealVector diag(4);
  diag << 4, 1, 1, 1;
  CHECK((m.XB - ComplexMatrix(diag.cast<cdouble>().asDiagonal())).norm() <= 1e-14);

  Rng r(1);
  EffectiveLinks g;
  g.psiB = sample_rayleigh(1, 8, r);
  g.psiE = sample_rayleigh(3, 8, r);
  const SecrecyMatrices h = build_secrecy_matrices(g, 0.7, 0.2, 0.3, 0.4);
  for (const ComplexMatrix* X : {&h.XB, &h.XE}) {
    CHECK((*X - X->adjoint()).norm() <= 1e-12);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(*X);
    CHECK(es.eigenvalues().minCoeff() >= 1.0 - 1e-10);
  }
}

TEST_CASE("dominant generalized eigenvector") {
  SecrecyMatrices m;
  m.XE = ComplexMatrix::Identity(4, 4);
  m.XB = ComplexMatrix::Identity(4, 4);
  m.XB(0, 0) = 5.0;
  const ComplexVector w = optimal_beamformer(m);
  CHECK(std::abs(std::abs(w(0)) - 1.0) <= 1e-12);
  CHECK(w.tail(3).norm() <= 1e-12);

  m.XB = m.XE;
  CHECK_THAT(rayleigh_quotient(m, optimal_beamformer(m)), WithinAbs(1.0, 1e-12));
}

TEST_CASE("beamformer matches a general eigensolve of XE^-1 XB") {
  Rng r(2);
  for (int i = 0; i < 20; ++i) {
    EffectiveLinks l;
    l.psiB = sample_rayleigh(1, 8, r);
    l.psiE = sample_rayleigh(2, 8, r);
    const SecrecyMatrices m = build_secrecy_matrices(l, 0.5, 0.1, 0.2, 0.3);
    double lambda = 0.0;
    const ComplexVector w = optimal_beamformer(m, &lambda);
    const Eigen::ComplexEigenSolver<ComplexMatrix> es(m.XE.partialPivLu().solve(m.XB));
    Eigen::Index top = 0;
    es.eigenvalues().real().maxCoeff(&top);
    ComplexVector ref = es.eigenvectors().col(top);
    ref.normalize();
    CHECK_THAT(lambda, WithinRel(es.eigenvalues()(top).real(), 1e-10));
    CHECK_THAT(std::abs(ref.dot(w)), WithinAbs(1.0, 1e-9));
    CHECK_THAT(w.norm(), WithinAbs(1.0, 1e-12));
    CHECK(generalized_residual(m, w) <= 1e-8);
  }
}
