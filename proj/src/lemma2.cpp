// SPDX-License-Identifier: Apache-2.0
#include "lcris/lemma2.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "lcris/lc_model.hpp"

namespace lcris {

PropertyCase make_case_from_phases(const RVector& phases, double beta_k) {
  if (phases.size() < 1) throw std::invalid_argument("make_case_from_phases: empty phase vector");
  PropertyCase c;
  c.dim = static_cast<int>(phases.size());
  c.beta_k = beta_k;
  c.phases = phases;
  const CVector s = reflect_coeffs(phases);
  c.S_c = s * s.adjoint();
  return c;
}

PropertyCase make_restricted_case(std::uint64_t seed, int dim, double beta_k) {
  if (dim < 1) throw std::invalid_argument("make_restricted_case: dim must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, kPi);
  RVector phases(dim);
  for (Eigen::Index n = 0; n < phases.size(); ++n) phases[n] = unif(rng);
  PropertyCase c = make_case_from_phases(phases, beta_k);
  c.seed = seed;
  return c;
}

CMatrix hadamard_power(const CMatrix& S, double beta) {
  return S.unaryExpr([beta](const cplx& z) {
    const double r = std::abs(z);
    return r == 0.0 ? cplx(0.0) : std::polar(std::pow(r, beta), beta * std::arg(z));
  });
}

std::string Lemma2Check::describe() const {
  std::ostringstream os;
  os << (passed() ? "pass" : "FAIL");
  if (!psd) os << " psd(min_eig=" << min_eigenvalue << ")";
  if (!rank_one) os << " rank_one(sigma2/sigma1=" << sigma_ratio << ")";
  if (!unit_diagonal) os << " unit_diagonal(dev=" << diag_deviation << ")";
  if (!factorization) os << " factorization(err=" << factorization_error << ")";
  os << " phase_law_error=" << phase_law_error;
  if (!passed()) os << "\nwitness:\n" << witness;
  return os.str();
}

Lemma2Check check_lemma2(const PropertyCase& c) {
  Lemma2Check r;
  const CMatrix Sk = hadamard_power(c.S_c, c.beta_k);
  r.witness = Sk;

  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (Sk + Sk.adjoint()), Eigen::EigenvaluesOnly);
  const RVector& lam = es.eigenvalues();
  r.min_eigenvalue = lam(0);
  r.psd = r.min_eigenvalue >= -1e-9;

  RVector sv = lam.cwiseAbs();
  std::sort(sv.data(), sv.data() + sv.size(), std::greater<double>());
  r.sigma_ratio = sv.size() > 1 ? sv[1] / sv[0] : 0.0;
  r.rank_one = r.sigma_ratio <= 1e-9;

  r.diag_deviation = (Sk.diagonal().array() - cplx(1.0)).abs().maxCoeff();
  r.unit_diagonal = r.diag_deviation <= 1e-12;

  // s^{o beta} with the principal branch applied to each generator entry
  const CVector s = reflect_coeffs(c.phases);
  const CVector s_beta = s.unaryExpr([&](const cplx& z) { return std::polar(1.0, c.beta_k * std::arg(z)); });
  r.factorization_error = (Sk - s_beta * s_beta.adjoint()).norm();
  r.factorization = r.factorization_error <= 1e-10;

  const CVector s_law = reflect_coeffs((c.beta_k * c.phases).eval());
  r.phase_law_error = (Sk - s_law * s_law.adjoint()).norm();
  return r;
}

}  // namespace lcris
