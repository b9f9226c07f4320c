// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <random>

#include "doctest.h"
#include "lcris/errors.hpp"
#include "lcris/optimizer.hpp"
#include "lcris/sdp.hpp"

using namespace lcris;

namespace {

ScenarioConfig small_config(int n, int k, const GridCounts& ur, const GridCounts& er) {
  ScenarioConfig c;
  c.ris_array.counts = {n};
  c.num_subcarriers = k;
  c.user_resolution = ur;
  c.eve_resolution = er;
  validate_scenario(c);
  return c;
}

CMatrix random_hermitian(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  CMatrix m(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) m(i, j) = cplx(g(rng), g(rng));
  }
  return 0.5 * (m + m.adjoint());
}

// Model with scalar (N = 1) factors so traces are set directly.
DesignModel scalar_model(const std::vector<std::vector<std::pair<double, double>>>& per_k) {
  DesignModel m;
  m.dim = 1;
  for (const auto& triples : per_k) {
    m.beta.push_back(1.0);
    auto& fu = m.user_factors.emplace_back();
    auto& fe = m.eve_factors.emplace_back();
    for (const auto& [tu, te] : triples) {
      fu.push_back(CVector::Constant(1, std::sqrt(tu)));
      fe.push_back(CVector::Constant(1, std::sqrt(te)));
    }
  }
  return m;
}

}  // namespace

TEST_CASE("closed-form beamformer") {
  const ScenarioConfig c = small_config(8, 3, {1, 1, 1}, {1, 1, 1});
  CHECK(c.tx_power_dbm == 43.0);
  const CVector q = beamformer_lemma1(c);
  CHECK(std::abs(q.squaredNorm() - c.tx_power_watt()) <= 1e-12 * c.tx_power_watt());
  const CVector a = steering_bs(c.ris_position, c.carrier_hz, c.bs_array, c.bs_position);
  const double best = std::abs(a.dot(q));
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 1000; ++t) {
    CVector r(q.size());
    for (auto& z : r) z = cplx(g(rng), g(rng));
    r *= std::sqrt(c.tx_power_watt() * u(rng)) / r.norm();
    CHECK(std::abs(a.dot(r)) <= best * (1.0 + 1e-9));
  }
}

TEST_CASE("constraint matrices") {
  const ScenarioConfig c = small_config(6, 5, {3, 3, 1}, {2, 2, 1});
  const Experiment exp = make_experiment(c);
  const DesignModel m = build_design_model(exp.channels, exp.grid.beta_k, beamformer_lemma1(c));
  const auto cons = build_constraint_matrices(1.5, m);
  CHECK(cons.size() == 180);
  CHECK(m.num_triples() == 180);

  const auto zero = build_constraint_matrices(0.0, m);
  for (const auto& cm : zero) {
    const CVector& w = m.user_factors[cm.k][cm.user];
    CHECK((cm.A - w * w.adjoint()).norm() == 0.0);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(cm.A);
    CHECK(es.eigenvalues().minCoeff() >= -1e-12 * es.eigenvalues().maxCoeff());
  }

  // the most negative eigenvalue only decreases as gamma grows
  for (std::size_t idx : {std::size_t{0}, std::size_t{77}, std::size_t{179}}) {
    double prev = 1e300;
    for (double gamma : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) {
      const CMatrix A = build_constraint_matrices(gamma, m)[idx].A;
      Eigen::SelfAdjointEigenSolver<CMatrix> es(A, Eigen::EigenvaluesOnly);
      CHECK(es.eigenvalues()(0) <= prev + 1e-18);
      prev = es.eigenvalues()(0);
    }
  }
  CHECK_THROWS_AS(build_constraint_matrices(-1.0, m), std::domain_error);
}

TEST_CASE("Hadamard power linearization") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, kPi);
  CVector s(5);
  for (auto& z : s) z = std::polar(1.0, u(rng));
  const CMatrix S = s * s.adjoint();

  const auto one = hadamard_linearize(S, 1.0);
  CHECK(one.value == S);
  CHECK(one.slope == CMatrix::Ones(5, 5));

  const double beta = 0.88;
  const auto lin = hadamard_linearize(S, beta);
  for (int i = 0; i < 5; ++i) {
    CHECK(std::abs(lin.value(i, i) - 1.0) < 1e-14);
    CHECK(lin.slope(i, i) == cplx(beta));
    for (int j = 0; j < 5; ++j) {
      const double theta = std::arg(S(i, j));
      CHECK(std::abs(lin.value(i, j) - std::polar(1.0, beta * theta)) < 1e-12);
    }
  }

  // first-order accuracy along a small step
  const CMatrix dS = 1e-5 * random_hermitian(rng, 5);
  const CMatrix T = S + dS;
  const auto at_t = hadamard_linearize(T, beta);
  const CMatrix predicted = lin.value + lin.slope.cwiseProduct(dS);
  CHECK((at_t.value - predicted).norm() <= 1e-8);

  CMatrix Z = CMatrix::Identity(3, 3);
  Z(0, 1) = Z(1, 0) = 1e-12;
  const auto reg = hadamard_linearize(Z, 0.9);
  CHECK(reg.value(0, 1) == cplx(0.0));
  CHECK(reg.slope(0, 1) == cplx(0.0));
  CHECK(reg.value(2, 2) == cplx(1.0));
}

TEST_CASE("branch-referenced linearization follows the phase law") {
  RVector w(4);
  w << 0.1, 3.9, 5.8, 2.2;  // several differences beyond pi
  const PhaseProfile p(w);
  const CMatrix S = lifted_from_profile(p, 1.0);
  for (double beta : {0.85, 0.97, 1.12}) {
    const auto lin = hadamard_linearize(S, beta, w);
    CHECK((lin.value - lifted_from_profile(p, beta)).norm() < 1e-12);
    // the principal branch disagrees on the same input
    CHECK((hadamard_linearize(S, beta).value - lifted_from_profile(p, beta)).norm() > 0.1);
  }
  CHECK_THROWS_AS(hadamard_linearize(S, 0.9, RVector::Zero(3)), std::invalid_argument);
}

TEST_CASE("penalty objective") {
  CVector s(2);
  s << 1.0, std::polar(1.0, 2.0);
  const CMatrix S = s * s.adjoint();
  const double eta = 0.01;
  const CMatrix C = penalty_objective(S, eta);
  CHECK((C - eta * S / 2.0).norm() < 1e-12);
  CHECK((S.array() * C.conjugate().array()).sum().real() ==
        doctest::Approx(eta * 2.0).epsilon(1e-12));  // eta * ||S||_2

  sdp::Problem prob;
  prob.dim = 2;
  prob.C = C;
  const sdp::Solution sol = sdp::solve(prob);
  REQUIRE(sol.status == sdp::Status::Optimal);
  CHECK((sol.S - S).norm() < 1e-4);
  // brute force over the feasible disc |z| <= 1
  double best = -1e300;
  for (int a = 0; a <= 200; ++a) {
    for (int b = 0; b < 360; ++b) {
      const cplx z = std::polar(a / 200.0, b * kTwoPi / 360.0);
      CMatrix T = CMatrix::Identity(2, 2);
      T(0, 1) = z;
      T(1, 0) = std::conj(z);
      best = std::max(best, (T.array() * C.conjugate().array()).sum().real());
    }
  }
  CHECK(sol.objective == doctest::Approx(best).epsilon(1e-4));
  CHECK_THROWS_AS(penalty_objective(S, 0.0), std::domain_error);
}

TEST_CASE("gamma closed form on hand-set traces") {
  const std::vector<CMatrix> one{CMatrix::Ones(1, 1)};
  CHECK(gamma_update(one, scalar_model({{{3.0, 1.0}}})) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(gamma_update(one, scalar_model({{{0.0, 0.0}}})) == 1.0);
  const std::vector<CMatrix> two{CMatrix::Ones(1, 1), CMatrix::Ones(1, 1)};
  CHECK(gamma_update(two, scalar_model({{{3.0, 1.0}}, {{7.0, 3.0}}})) ==
        doctest::Approx(2.0).epsilon(1e-15));
  CHECK_THROWS_AS(gamma_update(one, scalar_model({{{3.0, 1.0}}, {{7.0, 3.0}}})),
                  std::invalid_argument);
}

TEST_CASE("profile extraction") {
  CVector s(2);
  s << 1.0, cplx(0.0, 1.0);
  const PhaseProfile p = extract_profile(s * s.adjoint());
  CHECK(p.omega_c()[0] == doctest::Approx(0.0));
  CHECK(p.omega_c()[1] == doctest::Approx(kPi / 2).epsilon(1e-12));
  CHECK(extract_profile(CMatrix::Ones(4, 4)).omega_c().isZero(1e-12));

  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  for (int t = 0; t < 20; ++t) {
    CVector v(12);
    for (auto& z : v) z = std::polar(1.0, u(rng));
    const CMatrix S = v * v.adjoint();
    const CMatrix back = lifted_from_profile(extract_profile(S), 1.0);
    CHECK((back - S).norm() <= 1e-8);
  }
}

TEST_CASE("penalty loop drives the lift to rank one") {
  ScenarioConfig c = small_config(8, 3, {1, 1, 1}, {1, 1, 1});
  const Experiment exp = make_experiment(c);
  const DesignResult r = run_algorithm1(exp, beamformer_lemma1(c));
  REQUIRE(r.log.size() == 18);
  const auto& last = r.log.back();
  CHECK(last.inner == 9);
  CHECK(last.rank_residual <= 1e-3);
  for (int j = 1; j <= 2; ++j) {
    double prev_eta = 0.0;
    for (const auto& e : r.log) {
      if (e.outer != j) continue;
      CHECK(e.eta > prev_eta);
      prev_eta = e.eta;
    }
  }
  CHECK(r.log.front().eta == 0.01);
  CHECK(r.log[8].eta == doctest::Approx(0.01 * std::pow(5.0, 8)));
  CHECK(r.log[9].eta == 0.01);  // reset for the next outer iteration
  // gamma from the optimizer's model agrees with the evaluated worst case
  CHECK(std::abs(std::log2(r.gamma_final) - r.alpha) <= 0.05);
  for (double w : r.profile.omega_c()) CHECK((w >= 0.0 && w < kTwoPi));
}

TEST_CASE("design is deterministic for a fixed seed") {
  const ScenarioConfig c = small_config(8, 3, {2, 1, 1}, {1, 1, 1});
  const Experiment exp = make_experiment(c);
  const CVector q = beamformer_lemma1(c);
  const DesignResult a = run_algorithm1(exp, q);
  const DesignResult b = run_algorithm1(exp, q);
  CHECK(a.profile.omega_c() == b.profile.omega_c());
  CHECK(a.alpha == b.alpha);
  CHECK(a.lifted == b.lifted);
  REQUIRE(a.log.size() == b.log.size());
  for (std::size_t i = 0; i < a.log.size(); ++i) {
    CHECK(a.log[i].inner_objective == b.log[i].inner_objective);
  }
}

TEST_CASE("distant eavesdropper leaves only the user rate") {
  ScenarioConfig c = small_config(8, 3, {1, 1, 1}, {1, 1, 1});
  c.eve_region = {{1000, -1000, -5}, {1000, -1000, -5}};
  validate_scenario(c);
  const Experiment exp = make_experiment(c);
  const DesignResult r = run_algorithm1(exp, beamformer_lemma1(c));
  double min_user = 1e300;
  for (const auto& e : r.report.entries) min_user = std::min(min_user, e.snr_u);
  CHECK(r.alpha == doctest::Approx(std::log2(1.0 + min_user)).epsilon(0.1 / std::log2(1.0 + min_user)));
  CHECK(r.alpha > 1.0);
}

TEST_CASE("benchmarks on a single carrier coincide with the proposed design") {
  const ScenarioConfig c = small_config(8, 1, {2, 1, 1}, {1, 1, 1});
  const Experiment exp = make_experiment(c);
  const CVector q = beamformer_lemma1(c);
  const DesignResult p = run_algorithm1(exp, q);
  const DesignResult b1 = benchmark1(exp, q);
  CHECK(p.profile.omega_c() == b1.profile.omega_c());
  CHECK(p.alpha == b1.alpha);
}

TEST_CASE("benchmark relations") {
  const ScenarioConfig c = small_config(8, 5, {2, 2, 1}, {2, 1, 1});
  const Experiment exp = make_experiment(c);
  const CVector q = beamformer_lemma1(c);

  const DesignResult b2 = benchmark2(exp, q);
  const int center = 2;
  CHECK(exp.grid.beta_k[center] == 1.0);
  CHECK(b2.alpha <= b2.report.worst_per_k[center]);
  CHECK(std::max(0.0, std::log2(b2.gamma_final)) ==
        doctest::Approx(b2.report.worst_per_k[center]).epsilon(1e-9));

  const DesignResult b3 = benchmark3(exp, q);
  const ChannelSet centers = build_los_channels(c, exp.grid, {c.user_region.center()},
                                                {c.eve_region.center()});
  const SecrecyReport at_centers = worst_case_report(b3.profile, q, centers, exp.grid);
  CHECK(b3.alpha <= at_centers.alpha);
  CHECK(std::max(0.0, std::log2(b3.gamma_final)) == doctest::Approx(at_centers.alpha).epsilon(1e-9));

  // bench1 differs from the proposed model only away from the carrier
  const DesignModel mp = build_design_model(exp.channels, exp.grid.beta_k, q);
  const std::vector<double> ones(exp.grid.beta_k.size(), 1.0);
  const DesignModel m1 = build_design_model(exp.channels, ones, q);
  const CMatrix S = lifted_from_profile(b2.profile, 1.0);
  const RVector ref = b2.profile.omega_c();
  CHECK(hadamard_linearize(S, mp.beta[center], ref).value ==
        hadamard_linearize(S, m1.beta[center], ref).value);
  CHECK(hadamard_linearize(S, mp.beta[0], ref).value != hadamard_linearize(S, m1.beta[0], ref).value);
}

TEST_CASE("pure penalty objective backs off gamma and aborts at gamma 1") {
  // one element, the eavesdropper always hears more than the user
  const DesignModel m = scalar_model({{{0.0, 4.0}}});
  SolverParams sp;
  sp.margin_objective = false;
  auto eval = [](const PhaseProfile&) { return 0.0; };
  CHECK_THROWS_AS(run_penalty_ao(m, sp, 1, eval), SolverAbort);

  const DesignModel ok = scalar_model({{{8.0, 1.0}}});
  const AlgorithmOutput out = run_penalty_ao(ok, sp, 1, eval);
  CHECK(out.gamma_final == doctest::Approx(4.5));
  CHECK(out.log.size() == 18);
}

TEST_CASE("method names") {
  for (Method m : {Method::Proposed, Method::Bench1, Method::Bench2, Method::Bench3}) {
    CHECK(method_from_string(to_string(m)) == m);
  }
  CHECK_THROWS_AS(method_from_string("bench4"), std::invalid_argument);
}
