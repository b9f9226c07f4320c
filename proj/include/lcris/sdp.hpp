// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "lcris/types.hpp"

namespace lcris::sdp {

// Re tr(B S) - margin_weight * tau >= rhs
struct Inequality {
  CMatrix B;
  double rhs = 0.0;
  double margin_weight = 0.0;
};

// maximize   Re tr(C S) + margin_cost * tau
// subject to diag(S) = 1, S >= 0 (Hermitian PSD), tau >= 0, inequalities.
// tau only exists when has_margin is set.
struct Problem {
  int dim = 0;
  CMatrix C;
  std::vector<Inequality> inequalities;
  bool has_margin = false;
  double margin_cost = 0.0;

  void validate() const;
};

enum class Status { Optimal, Infeasible, MaxIters };

const char* to_string(Status s);

// Dual point of the internal primal-dual iteration, reusable as a warm start.
struct DualPoint {
  RVector y;
  CMatrix Z;
  RVector slack;  // primal LP variables (inequality slacks, then tau)
  RVector slack_dual;
};

struct Solution {
  CMatrix S;
  double objective = 0.0;
  double margin = 0.0;
  Status status = Status::MaxIters;
  double primal_residual = 0.0;  // worst relative inequality violation
  double diag_deviation = 0.0;
  double psd_violation = 0.0;    // max(0, -lambda_min)
  int iterations = 0;
  DualPoint dual;
};

struct Params {
  double feasibility_tol = 1e-6;
  double gap_tol = 1e-7;
  int max_iters = 0;  // 0: 50 * dim
  bool feasibility_phase = true;
};

struct WarmStart {
  CMatrix S;
  std::optional<DualPoint> dual;
  std::optional<double> margin;
};

Solution solve(const Problem& problem, const Params& params = {},
               const WarmStart* warm_start = nullptr);

// Dominant eigenpair of a Hermitian matrix. The vector has unit norm and its
// first entry with modulus above 1e-12 is real positive. For a repeated top
// eigenvalue the vector is the normalized projection of the first unit
// vector e_i not orthogonal to the eigenspace.
std::pair<double, CVector> leading_eigvec(const CMatrix& S);

// (||S||_* - ||S||_2) / max(||S||_2, eps)
double rank_one_residual(const CMatrix& S);

// Text dump format (see README): dimension, objective, margin data and the
// inequalities, matrices as rows of interleaved re,im values.
void write_problem(std::ostream& os, const Problem& problem);
Problem read_problem(std::istream& is);

}  // namespace lcris::sdp
