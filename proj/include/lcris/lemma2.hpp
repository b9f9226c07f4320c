// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>

#include "lcris/types.hpp"

namespace lcris {

// A rank-one, unit-modulus lifted matrix S_c = s s^H together with the
// subcarrier scale beta_k it is raised to.
struct PropertyCase {
  std::uint64_t seed = 0;
  int dim = 0;
  double beta_k = 1.0;
  RVector phases;  // generator phases of s
  CMatrix S_c;
};

// Phases drawn uniformly from [0, pi) so every pairwise difference is in (-pi, pi).
PropertyCase make_restricted_case(std::uint64_t seed, int dim, double beta_k);
PropertyCase make_case_from_phases(const RVector& phases, double beta_k);

struct Lemma2Check {
  bool psd = false;
  bool rank_one = false;
  bool unit_diagonal = false;
  bool factorization = false;
  double min_eigenvalue = 0.0;
  double sigma_ratio = 0.0;        // sigma_2 / sigma_1
  double diag_deviation = 0.0;
  double factorization_error = 0.0;  // Frobenius
  // Distance between the principal-branch power and the phase-law matrix
  // exp(j beta_k (w_i - w_j)); zero whenever all differences lie in (-pi, pi].
  double phase_law_error = 0.0;
  CMatrix witness;

  bool passed() const { return psd && rank_one && unit_diagonal && factorization; }
  std::string describe() const;
};

CMatrix hadamard_power(const CMatrix& S, double beta);

Lemma2Check check_lemma2(const PropertyCase& c);

}  // namespace lcris
