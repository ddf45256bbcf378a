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

#include <algorithm>

using namespace testing;

TEST_CASE("single-user interference system is trivial") {
  SystemConfig c = with_users(SystemConfig{}, 1);
  const Instance in = random_instance(c, 1);
  const PrecoderResult pr = precode(in.ch, in.v, in.W, in.s);
  REQUIRE(pr.Q.rows() == 1);
  CHECK(pr.Q(0, 0) == pr.q(0));
  CHECK_THAT(std::abs(pr.varpi(0) - 1.0), WithinAbs(0.0, 1e-15));
  CHECK(interference_residual(in.ch, in.v, in.W, in.s, pr.varpi) <= 1e-15 * std::abs(pr.q(0)));
  CHECK(cross_user_leakage(in.ch, in.v, in.W, in.s, pr.varpi) == 0.0);
}

TEST_CASE("interference matrix matches a scalar evaluation entry by entry") {
  const Instance in = random_instance(SystemConfig{}, 2);
  const InterferenceSystem sys = build_interference_system(in.ch, in.v, in.W, in.s);
  const int nt = in.cfg->antennas_per_user;
  for (int k = 0; k < 2; ++k)
    for (int u = 0; u < 2; ++u) {
      cdouble acc = 0.0;
      for (int m = 0; m < in.cfg->ris_elements; ++m) {
        cdouble gw = 0.0;
        for (int n = 0; n < nt; ++n) gw += in.ch.G(m, u * nt + n) * in.W.w[static_cast<size_t>(u)](n);
        acc += std::conj(in.ch.hB[static_cast<size_t>(k)](m)) * in.v(m) * gw;
      }
      acc *= std::sqrt(in.W.powers(u)) * in.s(u);
      CHECK(std::abs(sys.Q(k, u) - acc) <= 1e-12 * std::abs(acc));
    }
  CHECK(sys.q == sys.Q.diagonal());
}

TEST_CASE("constructed orthogonality zeroes one cross entry") {
  Instance in = random_instance(SystemConfig{}, 3);
  // Make hB_1 orthogonal to Theta G_2 w_2.
  const ComplexVector img = in.v.values().cwiseProduct(in.ch.G_block(1) * in.W.w[1]);
  ComplexVector& h = in.ch.hB[0];
  h -= (img.dot(h) / img.squaredNorm()) * img;
  const InterferenceSystem sys = build_interference_system(in.ch, in.v, in.W, in.s);
  CHECK(std::abs(sys.Q(0, 1)) <= 1e-13);
}

TEST_CASE("linear solve special cases") {
  ComplexVector q(3);
  q << cdouble(1, 2), cdouble(-3, 0.5), cdouble(0, 1);
  CHECK((solve_precoder(ComplexMatrix::Identity(3, 3), q) - q).norm() == 0.0);

  ComplexMatrix D = ComplexMatrix::Zero(3, 3);
  D.diagonal() << cdouble(2, 0), cdouble(0, 4), cdouble(1, 1);
  const ComplexVector x = solve_precoder(D, q);
  for (int k = 0; k < 3; ++k) CHECK(std::abs(x(k) - q(k) / D(k, k)) <= 1e-15);

  Rng r(9);
  const ComplexMatrix A = sample_rayleigh(4, 4, r) + 4.0 * ComplexMatrix::Identity(4, 4);
  const ComplexVector b = sample_rayleigh(4, 1, r).col(0);
  CHECK((A * solve_precoder(A, b) - b).norm() <= 1e-10 * b.norm());

  ComplexMatrix S = ComplexMatrix::Ones(2, 2);
  CHECK(throws_code([&] { solve_precoder(S, ComplexVector::Ones(2)); }, ErrorCode::SingularSystem));
}

TEST_CASE("precoder cancels interference; unprecoded transmission does not") {
  const Instance in = random_instance(SystemConfig{}, 4);
  const PrecoderResult pr = precode(in.ch, in.v, in.W, in.s);
  CHECK((pr.Q * pr.varpi - pr.q).norm() <= 1e-10 * pr.q.norm());
  CHECK(interference_residual(in.ch, in.v, in.W, in.s, pr.varpi) <= 1e-9 * pr.q.norm());
  CHECK(interference_residual(in.ch, in.v, in.W, in.s, ComplexVector::Ones(2)) > 1e-3 * pr.q.norm());
  // The cross-user part alone is q_k (1 - varpi(k)), not zero.
  const double expected = std::max(std::abs(pr.q(0) * (1.0 - pr.varpi(0))), std::abs(pr.q(1) * (1.0 - pr.varpi(1))));
  CHECK_THAT(cross_user_leakage(in.ch, in.v, in.W, in.s, pr.varpi), WithinRel(expected, 1e-9));
}

TEST_CASE("precoded streams equal sqrt(P) varpi s") {
  const Instance in = random_instance(SystemConfig{}, 5);
  const PrecoderResult pr = precode(in.ch, in.v, in.W, in.s);
  const ComplexVector z = precoded_streams(interference_channel(in.ch, in.v, in.W.w), in.W.powers, in.s);
  for (int k = 0; k < 2; ++k)
    CHECK(std::abs(z(k) - std::sqrt(in.W.powers(k)) * pr.varpi(k) * in.s(k)) <= 1e-12 * std::abs(z(k)));
}

TEST_CASE("mean precoder matches the symbol average") {
  const Instance in = random_instance(SystemConfig{}, 6);
  const QamConstellation qam(4, 0.5);
  ComplexVector acc = ComplexVector::Zero(2);
  int n = 0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      ComplexVector s(2);
      s << qam.point(a), qam.point(b);
      acc += precode(in.ch, in.v, in.W, s).varpi;
      ++n;
    }
  acc /= n;
  CHECK((acc - mean_precoder(interference_channel(in.ch, in.v, in.W.w))).norm() <= 1e-12);
}

TEST_CASE("beta estimation") {
  SolverOptions o;
  o.beta_samples = 200;
  const BetaEstimate single = estimate_beta(validate_config(with_users(SystemConfig{}, 1)), {}, o, Rng(1));
  CHECK(single.beta == 1.0);

  const ValidatedConfig cfg = validate_config(SystemConfig{});
  CHECK(estimate_beta(cfg, {}, o, Rng(2)).beta == estimate_beta(cfg, {}, o, Rng(2)).beta);

  o.beta_samples = 10000;
  const BetaEstimate a = estimate_beta(cfg, {}, o, Rng(3));
  const BetaEstimate b = estimate_beta(cfg, {}, o, Rng(4));
  const double combined = std::hypot(a.standard_error, b.standard_error);
  CHECK(std::abs(a.beta - b.beta) <= 3.0 * combined);
}

TEST_CASE("jamming closed form arithmetic") {
  SystemConfig c = with_users(SystemConfig{}, 1);
  c.ris_elements = 1;
  c.eve_antennas = 1;
  c.total_power = 1.0;
  CHECK(jamming_variance_closed_form(c, 1.0, 1.0) == 4.0);
  CHECK(jamming_variance_closed_form(c, 1.0, 1.0, CrossTermSign::Minus) == 0.0);
  SystemConfig c2 = c;
  c2.ris_elements = 2;
  CHECK(jamming_variance_closed_form(c2, 0.7, 0.3) == 2.0 * jamming_variance_closed_form(c, 0.7, 0.3));
}

TEST_CASE("empirical jamming variance: zero source and quadratic beta scaling") {
  SystemConfig c = with_users(SystemConfig{}, 2);
  c.ris_elements = 4;
  c.eve_antennas = 2;
  const Instance in = random_instance(c, 7);
  // varpi = e_k with only user k active cancels the source for user k.
  BeamformerSet W = in.W;
  W.powers << 1.0, 0.0;
  ComplexVector varpi(2);
  varpi << 1.0, 0.0;
  Rng r0(1);
  CHECK(jamming_variance_empirical(c, in.v, W, varpi, in.s, 1.0, 0, 1000, r0).mean == 0.0);

  const ComplexVector vp = precode(in.ch, in.v, in.W, in.s).varpi;
  Rng r1(2), r2(2);
  const double one = jamming_variance_empirical(c, in.v, in.W, vp, in.s, 1.0, 0, 2000, r1).mean;
  const double three = jamming_variance_empirical(c, in.v, in.W, vp, in.s, 3.0, 0, 2000, r2).mean;
  CHECK_THAT(three, WithinRel(9.0 * one, 1e-12));
}

TEST_CASE("expected jamming variance matches the symbol average of the conditional form") {
  const Instance in = random_instance(SystemConfig{}, 8);
  const double beta = 0.8;
  const QamConstellation qam(4, 0.5);
  RealVector acc = RealVector::Zero(2);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      ComplexVector s(2);
      s << qam.point(a), qam.point(b);
      const ComplexVector vp = precode(in.ch, in.v, in.W, s).varpi;
      for (int k = 0; k < 2; ++k) acc(k) += jamming_variance_conditional(in.ch, in.W, vp, s, beta, k) / 16.0;
    }
  const RealVector exact = jamming_variance_expected(in.ch, in.v, in.W, beta);
  for (int k = 0; k < 2; ++k) CHECK_THAT(exact(k), WithinRel(acc(k), 1e-10));
}

TEST_CASE("transmit energy under beta scaling") {
  SolverOptions o;
  o.beta_samples = 2000;
  const ValidatedConfig cfg = validate_config(SystemConfig{});
  const double beta = estimate_beta(cfg, {}, o, Rng(21)).beta;
  const QamConstellation qam(4, 0.5);
  std::vector<double> ratio;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    Rng r = Rng(22).substream(static_cast<std::uint64_t>(i));
    const ChannelSet ch = generate_channel_set(cfg, {}, r);
    const PhaseVector v = PhaseVector::random(16, r);
    const BeamformerSet W = random_beamformers(2, 8, 1.0, r);
    ComplexVector s(2);
    for (int k = 0; k < 2; ++k) s(k) = qam.point(qam.random_label(r));
    const ComplexVector varpi = precode(ch, v, W, s).varpi;
    const double own = std::sqrt(2.0 / varpi.squaredNorm());
    // The draw's own normalizer gives exactly Ptot.
    CHECK_THAT(2.0 * (own * transmit_vector(W, varpi, s)).squaredNorm(), WithinRel(1.0, 1e-9));
    ratio.push_back(2.0 * (beta * transmit_vector(W, varpi, s)).squaredNorm());
  }
  // With the shared beta the energy is (beta / beta_i)^2 per draw. Its mean is
  // at least Ptot and heavy tailed, so it sits well above the median.
  double mean, se;
  mean_and_stderr(ratio, mean, se);
  std::nth_element(ratio.begin(), ratio.begin() + n / 2, ratio.end());
  CHECK(mean >= 1.0);
  CHECK(mean > ratio[static_cast<size_t>(n / 2)]);
}

// ---- rates -----------------------------------------------------------------

TEST_CASE("effective link plumbing") {
  SystemConfig c = with_users(SystemConfig{}, 1);
  c.antennas_per_user = 4;
  c.tx_antennas = 4;
  c.ris_elements = 3;
  Rng r(1);
  ChannelSet ch = generate_channel_set(validate_config(c), {}, r);
  ch.hB[0] = ComplexVector::Zero(3);
  ch.hB[0](0) = 1.0;
  ch.G.setZero();
  ch.G.row(0).setOnes();
  const EffectiveLinks l = effective_links(ch, PhaseVector::ones(3), 1.0, 0);
  CHECK((l.psiB - Eigen::RowVectorXcd::Ones(4)).norm() == 0.0);

  const Instance in = random_instance(SystemConfig{}, 9);
  const EffectiveLinks a = effective_links(in.ch, in.v, 1.0, 1);
  const EffectiveLinks b = effective_links(in.ch, in.v, 2.5, 1);
  CHECK((b.psiB - 2.5 * a.psiB).norm() <= 1e-13);
  CHECK((b.psiE - 2.5 * a.psiE).norm() <= 1e-13);

  const ComplexVector& w = in.W.w[1];
  cdouble direct = 0.0;
  for (int m = 0; m < 16; ++m) {
    cdouble gw = 0.0;
    for (int n = 0; n < 8; ++n) gw += in.ch.G(m, 8 + n) * w(n);
    direct += std::conj(in.ch.hB[1](m)) * in.v(m) * gw;
  }
  CHECK_THAT(std::norm((b.psiB * w)(0)), WithinRel(std::norm(2.5 * direct) / 2.0, 1e-12));
}

TEST_CASE("per-user rate formulas") {
  Eigen::RowVectorXcd psiB(2);
  psiB << 1.0, 0.0;
  ComplexVector w(2);
  w << 1.0, 0.0;
  CHECK(rate_bob(psiB, w, 0.0, 0.1) == 0.0);
  CHECK_THAT(rate_bob(psiB, w, 1.0, 1.0), WithinAbs(1.0, 1e-15));
  CHECK_THAT(rate_bob(std::sqrt(3.0) * psiB, w, 1.0, 1.0), WithinAbs(2.0, 1e-14));

  ComplexMatrix psiE = ComplexMatrix::Zero(2, 2);
  psiE(0, 0) = std::sqrt(0.5);
  CHECK(rate_eve(psiE, w, 0.0, 0.1, 1.0) == 0.0);
  CHECK_THAT(rate_eve(psiE, w, 1.0, 0.2, 0.3), WithinAbs(1.0, 1e-15));
  double prev = rate_eve(psiE, w, 1.0, 0.2, 0.01);
  for (double j = 0.02; j < 1e6; j *= 2.0) {
    const double r = rate_eve(psiE, w, 1.0, 0.2, j);
    CHECK(r <= prev);
    prev = r;
  }
  CHECK(prev < 1e-5);
}

TEST_CASE("secrecy report edge cases") {
  Instance in = random_instance(SystemConfig{}, 10);
  SystemConfig c = in.cfg.get();
  RealVector jam = RealVector::Zero(2);

  // Eve sees exactly what Bob 1 sees (one antenna), same noise, no jamming.
  SystemConfig one_eve = c;
  one_eve.eve_antennas = 1;
  ChannelSet mirror = in.ch;
  mirror.hB.resize(1);
  mirror.HE = in.ch.hB[0].adjoint();
  BeamformerSet W1;
  W1.w = {in.W.w[0]};
  W1.powers = RealVector::Constant(1, 1.0);
  SystemConfig single = with_users(one_eve, 1);
  const SecrecyReport sym = secrecy_report(mirror, in.v, W1, 1.0, RealVector::Zero(1), single);
  CHECK_THAT(sym.secrecy_per_user(0), WithinAbs(0.0, 1e-14));

  ChannelSet blind = in.ch;
  blind.HE.setZero();
  const SecrecyReport r = secrecy_report(blind, in.v, in.W, 0.9, jam, c);
  for (int k = 0; k < 2; ++k) CHECK(r.secrecy_per_user(k) == r.rate_bob(k));
}

TEST_CASE("secrecy sum rate matches an independent recomputation") {
  const Instance in = random_instance(SystemConfig{}, 11);
  const SystemConfig& c = in.cfg.get();
  RealVector jam(2);
  jam << 0.3, 0.7;
  const double beta = 0.6;
  const SecrecyReport r = secrecy_report(in.ch, in.v, in.W, beta, jam, c);
  double total = 0.0;
  for (int k = 0; k < 2; ++k) {
    const ComplexVector img = in.v.values().cwiseProduct(in.ch.G_block(k) * in.W.w[static_cast<size_t>(k)]);
    const double gb = beta * beta / 2.0 * std::norm(in.ch.hB[static_cast<size_t>(k)].dot(img));
    const double ge = beta * beta / 2.0 * (in.ch.HE * img).squaredNorm();
    const double rb = std::log2(1.0 + in.W.powers(k) * gb / c.noise_var_bob);
    const double re = std::log2(1.0 + in.W.powers(k) * ge / (c.noise_var_eve + jam(k)));
    total += std::max(0.0, rb - re);
  }
  CHECK_THAT(r.sum_rate, WithinRel(total, 1e-12));
}
