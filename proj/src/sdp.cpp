// SPDX-License-Identifier: Apache-2.0
//
// Infeasible-start primal-dual interior-point method for
//
//   max Re tr(C X) + c_l^T x   s.t.  A(X, x) = b,  X >= 0 (Hermitian),  x >= 0
//
// where the equality rows are the N unit-diagonal constraints followed by one
// row per inequality (its slack and the optional margin variable live in the
// LP block x). Search directions are HKM with a Mehrotra predictor-corrector.
#include "lcris/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "lcris/csv_io.hpp"
#include "lcris/errors.hpp"

namespace lcris::sdp {

namespace {

constexpr double kStepFraction = 0.95;
constexpr int kStallWindow = 25;

CMatrix hermitian_part(const CMatrix& A) { return 0.5 * (A + A.adjoint()); }

double re_inner(const CMatrix& A, const CMatrix& B) {
  // Re tr(A^H B) = Re tr(A B) for Hermitian A
  return (A.real().array() * B.real().array()).sum() + (A.imag().array() * B.imag().array()).sum();
}

double min_eigenvalue(const CMatrix& H) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(H), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

// Largest step t with X + t dX >= 0, given the Cholesky factor of X.
double max_step_psd(const Eigen::LLT<CMatrix>& llt_x, const CMatrix& dX) {
  const auto L = llt_x.matrixL();
  const CMatrix T = L.solve(dX);
  const CMatrix W = L.solve(T.adjoint());
  const double lmin = min_eigenvalue(W);
  return lmin < 0.0 ? -1.0 / lmin : std::numeric_limits<double>::infinity();
}

double max_step_lp(const RVector& x, const RVector& dx) {
  double t = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (dx[i] < 0.0) t = std::min(t, -x[i] / dx[i]);
  }
  return t;
}

// Problem data after row and objective scaling.
struct Scaled {
  int n = 0;
  int mi = 0;
  int nl = 0;  // LP variables: mi slacks (+1 margin)
  bool has_tau = false;
  CMatrix C;
  RVector c_lp;
  std::vector<CMatrix> B;
  RMatrix Bt;  // 2 n^2 x mi, columns [vec Re B_i; vec Im B_i]
  RVector b;   // n + mi
  RVector slack_coef;
  RVector tau_coef;
  RVector row_scale;
  double obj_scale = 1.0;

  int m() const { return n + mi; }
};

Scaled scale_problem(const Problem& p) {
  Scaled s;
  s.n = p.dim;
  s.mi = static_cast<int>(p.inequalities.size());
  s.has_tau = p.has_margin;
  s.nl = s.mi + (s.has_tau ? 1 : 0);
  const int nn = s.n * s.n;

  const CMatrix C = hermitian_part(p.C);
  s.obj_scale = std::max(C.norm(), std::abs(p.has_margin ? p.margin_cost : 0.0));
  if (!(s.obj_scale > 1e-300)) s.obj_scale = 1.0;
  s.C = C / s.obj_scale;
  s.c_lp = RVector::Zero(s.nl);
  if (s.has_tau) s.c_lp[s.mi] = p.margin_cost / s.obj_scale;

  s.b.resize(s.m());
  s.b.head(s.n).setOnes();
  s.Bt.resize(2 * nn, s.mi);
  s.slack_coef.resize(s.mi);
  s.tau_coef = RVector::Zero(s.mi);
  s.row_scale.resize(s.mi);
  for (int i = 0; i < s.mi; ++i) {
    const auto& in = p.inequalities[static_cast<std::size_t>(i)];
    const CMatrix Bi = hermitian_part(in.B);
    const double nb = Bi.norm();
    const double r = nb > 1e-14 ? 1.0 / nb : 1.0;
    s.row_scale[i] = r;
    s.B.push_back(r * Bi);
    Eigen::Map<RMatrix>(s.Bt.col(i).data(), s.n, s.n) = s.B.back().real();
    Eigen::Map<RMatrix>(s.Bt.col(i).data() + nn, s.n, s.n) = s.B.back().imag();
    s.b[s.n + i] = r * in.rhs;
    s.slack_coef[i] = -r;
    if (s.has_tau) s.tau_coef[i] = -r * in.margin_weight;
  }
  return s;
}

RVector vec_real(const CMatrix& Y) {
  const Eigen::Index nn = Y.size();
  RVector v(2 * nn);
  Eigen::Map<RMatrix>(v.data(), Y.rows(), Y.cols()) = Y.real();
  Eigen::Map<RMatrix>(v.data() + nn, Y.rows(), Y.cols()) = Y.imag();
  return v;
}

// A(Y, yl)
RVector apply_A(const Scaled& s, const CMatrix& Y, const RVector& yl) {
  RVector out(s.m());
  out.head(s.n) = Y.diagonal().real();
  if (s.mi > 0) {
    out.tail(s.mi) = s.Bt.transpose() * vec_real(Y);
    out.tail(s.mi) += s.slack_coef.cwiseProduct(yl.head(s.mi));
    if (s.has_tau) out.tail(s.mi) += s.tau_coef * yl[s.mi];
  }
  return out;
}

// A^T(y) split into the matrix block and the LP block.
void apply_AT(const Scaled& s, const RVector& y, CMatrix& mat, RVector& lp) {
  const int nn = s.n * s.n;
  mat = CMatrix::Zero(s.n, s.n);
  if (s.mi > 0) {
    const RVector v = s.Bt * y.tail(s.mi);
    mat.real() = Eigen::Map<const RMatrix>(v.data(), s.n, s.n);
    mat.imag() = Eigen::Map<const RMatrix>(v.data() + nn, s.n, s.n);
  }
  mat.diagonal().real() += y.head(s.n);
  lp.resize(s.nl);
  if (s.mi > 0) {
    lp.head(s.mi) = s.slack_coef.cwiseProduct(y.tail(s.mi));
    if (s.has_tau) lp[s.mi] = s.tau_coef.dot(y.tail(s.mi));
  }
}

struct Iterate {
  CMatrix X, Z;
  RVector x, z, y;
};

struct RunResult {
  Iterate it;
  bool converged = false;
  int iterations = 0;
};

RunResult run_ipm(const Scaled& s, Iterate it, double feas_target, double gap_tol, int max_iters) {
  const int n = s.n;
  const int m = s.m();
  const int nn = n * n;
  const double dof = static_cast<double>(n + s.nl);
  const double b_norm = s.b.norm();
  const double c_norm = s.C.norm() + s.c_lp.norm();

  RunResult res;
  double best_pinf = std::numeric_limits<double>::infinity();
  int best_iter = 0;

  for (int iter = 0;; ++iter) {
    res.iterations = iter;
    Eigen::LLT<CMatrix> llt_x(it.X);
    Eigen::LLT<CMatrix> llt_z(it.Z);
    if (llt_x.info() != Eigen::Success || llt_z.info() != Eigen::Success) break;

    const CMatrix Lx = llt_x.matrixL();
    const CMatrix LzInv = llt_z.matrixL().solve(CMatrix::Identity(n, n));
    const CMatrix Zinv = LzInv.adjoint() * LzInv;

    CMatrix ATy;
    RVector ATy_lp;
    apply_AT(s, it.y, ATy, ATy_lp);
    const RVector Fp = s.b - apply_A(s, it.X, it.x);
    const CMatrix Fd = s.C - ATy + it.Z;
    const RVector fd = s.c_lp - ATy_lp + it.z;

    const double pobj = re_inner(s.C, it.X) + s.c_lp.dot(it.x);
    const double dobj = s.b.dot(it.y);
    const double pinf = Fp.norm() / (1.0 + b_norm);
    const double dinf = std::sqrt(Fd.squaredNorm() + fd.squaredNorm()) / (1.0 + c_norm);
    const double gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
    const double mu = (re_inner(it.X, it.Z) + it.x.dot(it.z)) / dof;

    if (pinf <= feas_target && dinf <= feas_target && gap <= gap_tol) {
      res.converged = true;
      break;
    }
    if (iter >= max_iters) break;
    if (pinf < 0.9 * best_pinf) {
      best_pinf = pinf;
      best_iter = iter;
    } else if (pinf > feas_target && iter - best_iter >= kStallWindow) {
      break;
    }

    // Schur complement M_ij = Re tr(F_i X F_j Z^-1) + LP part, formed as Q^T Q
    // with columns of Q holding vec(Lz^-1 F_i Lx).
    RMatrix Q(2 * nn, m);
    for (int i = 0; i < m; ++i) {
      CMatrix P;
      if (i < n) {
        P = LzInv.col(i) * Lx.row(i);
      } else {
        P = LzInv.triangularView<Eigen::Lower>() * (s.B[static_cast<std::size_t>(i - n)] * Lx);
      }
      Eigen::Map<RMatrix>(Q.col(i).data(), n, n) = P.real();
      Eigen::Map<RMatrix>(Q.col(i).data() + nn, n, n) = P.imag();
    }
    RMatrix M = RMatrix::Zero(m, m);
    M.selfadjointView<Eigen::Lower>().rankUpdate(Q.transpose());
    M = M.selfadjointView<Eigen::Lower>();
    const RVector xz = it.x.cwiseQuotient(it.z);
    for (int i = 0; i < s.mi; ++i) {
      M(n + i, n + i) += s.slack_coef[i] * s.slack_coef[i] * xz[i];
    }
    if (s.has_tau) M.bottomRightCorner(s.mi, s.mi) += xz[s.mi] * s.tau_coef * s.tau_coef.transpose();

    Eigen::LLT<RMatrix> llt_m(M);
    double reg = 0.0;
    for (int attempt = 0; llt_m.info() != Eigen::Success && attempt < 6; ++attempt) {
      reg = reg == 0.0 ? 1e-14 * std::max(1.0, M.diagonal().maxCoeff()) : reg * 100.0;
      llt_m.compute(M + reg * RMatrix::Identity(m, m));
    }
    if (llt_m.info() != Eigen::Success) break;

    const CMatrix XFdZinv = it.X * Fd * Zinv;
    const RVector xfd = it.x.cwiseProduct(fd).cwiseQuotient(it.z);

    auto direction = [&](const CMatrix& Rc, const RVector& rc, CMatrix& dX, RVector& dx, RVector& dy,
                         CMatrix& dZ, RVector& dz) {
      const RVector rhs = apply_A(s, hermitian_part(Rc + XFdZinv), rc + xfd) - Fp;
      dy = llt_m.solve(rhs);
      RVector ATdy_lp;
      apply_AT(s, dy, dZ, ATdy_lp);
      dZ -= Fd;
      dZ = hermitian_part(dZ);
      dz = ATdy_lp - fd;
      dX = hermitian_part(Rc - it.X * dZ * Zinv);
      dx = rc - it.x.cwiseProduct(dz).cwiseQuotient(it.z);
    };
    auto steps = [&](const CMatrix& dX, const RVector& dx, const CMatrix& dZ, const RVector& dz) {
      const double ap = std::min({1.0, kStepFraction * max_step_psd(llt_x, dX),
                                  kStepFraction * max_step_lp(it.x, dx)});
      const double ad = std::min({1.0, kStepFraction * max_step_psd(llt_z, dZ),
                                  kStepFraction * max_step_lp(it.z, dz)});
      return std::pair{ap, ad};
    };

    // Predictor (affine scaling).
    CMatrix dXa, dZa;
    RVector dxa, dya, dza;
    direction(-it.X, -it.x, dXa, dxa, dya, dZa, dza);
    const auto [apa, ada] = steps(dXa, dxa, dZa, dza);
    const double mu_aff = (re_inner(it.X + apa * dXa, it.Z + ada * dZa) +
                           (it.x + apa * dxa).dot(it.z + ada * dza)) /
                          dof;
    const double sigma = std::clamp(std::pow(std::max(mu_aff, 0.0) / mu, 3.0), 0.0, 1.0);

    // Corrector.
    const CMatrix Rc = sigma * mu * Zinv - it.X - dXa * dZa * Zinv;
    const RVector rc = (sigma * mu) * it.z.cwiseInverse() - it.x -
                       dxa.cwiseProduct(dza).cwiseQuotient(it.z);
    CMatrix dX, dZ;
    RVector dx, dy, dz;
    direction(Rc, rc, dX, dx, dy, dZ, dz);
    const auto [ap, ad] = steps(dX, dx, dZ, dz);
    if (ap < 1e-12 && ad < 1e-12) break;

    it.X = hermitian_part(it.X + ap * dX);
    it.x += ap * dx;
    it.y += ad * dy;
    it.Z = hermitian_part(it.Z + ad * dZ);
    it.z += ad * dz;
  }
  res.it = std::move(it);
  return res;
}

Iterate cold_start(const Scaled& s) {
  Iterate it;
  it.X = CMatrix::Identity(s.n, s.n);
  double xi = 1.0;
  double bmax = 0.0;
  for (int i = 0; i < s.mi; ++i) {
    xi = std::max(xi, std::abs(s.b[s.n + i] - s.B[static_cast<std::size_t>(i)].trace().real()));
    bmax = std::max(bmax, s.B[static_cast<std::size_t>(i)].norm());
  }
  const double zeta = 1.0 + s.C.norm() + bmax;
  it.x = RVector::Constant(s.nl, xi);
  it.Z = zeta * CMatrix::Identity(s.n, s.n);
  it.z = RVector::Constant(s.nl, zeta);
  it.y = RVector::Zero(s.m());
  return it;
}

Iterate warm_iterate(const Scaled& s, const Problem& p, const WarmStart& w) {
  Iterate it = cold_start(s);
  if (w.S.rows() != s.n || w.S.cols() != s.n) {
    throw std::invalid_argument("sdp::solve: warm start has the wrong dimension");
  }
  const double theta = w.dual ? 1e-3 : 0.1;
  it.X = (1.0 - theta) * hermitian_part(w.S) + theta * CMatrix::Identity(s.n, s.n);
  if (w.dual && w.dual->y.size() == s.m() && w.dual->slack.size() == s.nl) {
    const auto& d = *w.dual;
    const double zeta = it.Z(0, 0).real();
    for (int i = 0; i < s.m(); ++i) {
      const double r = i < s.n ? 1.0 : s.row_scale[i - s.n];
      it.y[i] = d.y[i] / (s.obj_scale * r);
    }
    it.Z = d.Z / s.obj_scale + theta * zeta * CMatrix::Identity(s.n, s.n);
    it.x = d.slack.array() + theta;
    it.z = d.slack_dual.array() / s.obj_scale + theta * zeta;
  } else {
    const double tau = w.margin.value_or(0.0);
    for (int i = 0; i < s.mi; ++i) {
      const auto& in = p.inequalities[static_cast<std::size_t>(i)];
      const double slack = re_inner(hermitian_part(in.B), it.X) - in.margin_weight * tau - in.rhs;
      it.x[i] = std::max(slack, 1e-2);
    }
    if (s.has_tau) it.x[s.mi] = std::max(tau, 1e-2);
  }
  return it;
}

}  // namespace

void Problem::validate() const {
  if (dim < 1) throw std::invalid_argument("sdp::Problem: dim must be >= 1");
  auto check = [&](const CMatrix& A, const char* what) {
    if (A.rows() != dim || A.cols() != dim) {
      throw std::invalid_argument(std::string("sdp::Problem: ") + what + " has the wrong size");
    }
    const double scale = std::max(1.0, A.norm());
    if ((A - A.adjoint()).norm() > 1e-10 * scale) {
      throw std::invalid_argument(std::string("sdp::Problem: ") + what + " is not Hermitian");
    }
  };
  check(C, "objective");
  for (const auto& in : inequalities) check(in.B, "inequality matrix");
}

const char* to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "optimal";
    case Status::Infeasible: return "infeasible";
    case Status::MaxIters: return "max_iters";
  }
  return "unknown";
}

Solution solve(const Problem& problem, const Params& params, const WarmStart* warm_start) {
  problem.validate();
  const Scaled s = scale_problem(problem);
  const int max_iters = params.max_iters > 0 ? params.max_iters : 50 * problem.dim;
  const double feas_target = std::min(1e-8, 1e-2 * params.feasibility_tol);

  Iterate start = warm_start ? warm_iterate(s, problem, *warm_start) : cold_start(s);
  RunResult run = run_ipm(s, std::move(start), feas_target, params.gap_tol, max_iters);
  const Iterate& it = run.it;

  Solution sol;
  sol.iterations = run.iterations;
  sol.S = hermitian_part(it.X);
  const RVector d = sol.S.diagonal().real();
  if ((d.array() > 0.0).all()) {
    const RVector inv = d.cwiseSqrt().cwiseInverse();
    sol.S = inv.asDiagonal() * sol.S * inv.asDiagonal();
    sol.S = hermitian_part(sol.S);
  }
  sol.margin = s.has_tau ? it.x[s.mi] : 0.0;
  sol.objective = re_inner(hermitian_part(problem.C), sol.S) +
                  (problem.has_margin ? problem.margin_cost * sol.margin : 0.0);
  sol.diag_deviation = (sol.S.diagonal().real().array() - 1.0).abs().maxCoeff();
  sol.primal_residual = 0.0;
  for (const auto& in : problem.inequalities) {
    const double lhs = re_inner(hermitian_part(in.B), sol.S) - in.margin_weight * sol.margin;
    sol.primal_residual = std::max(sol.primal_residual, (in.rhs - lhs) / (1.0 + std::abs(in.rhs)));
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(sol.S, Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues()(0);
  const double lmax = es.eigenvalues()(problem.dim - 1);
  sol.psd_violation = std::max(0.0, -lmin);

  sol.dual.y.resize(s.m());
  for (int i = 0; i < s.m(); ++i) {
    const double r = i < s.n ? 1.0 : s.row_scale[i - s.n];
    sol.dual.y[i] = it.y[i] * s.obj_scale * r;
  }
  sol.dual.Z = it.Z * s.obj_scale;
  sol.dual.slack = it.x;
  sol.dual.slack_dual = it.z * s.obj_scale;

  const bool within = sol.primal_residual <= params.feasibility_tol &&
                      sol.diag_deviation <= params.feasibility_tol &&
                      sol.psd_violation <= 1e-7 * std::max(lmax, 1e-300);
  if (run.converged && within) {
    sol.status = Status::Optimal;
    return sol;
  }
  sol.status = Status::MaxIters;
  if (params.feasibility_phase) {
    Problem feas = problem;
    feas.C = CMatrix::Zero(problem.dim, problem.dim);
    feas.margin_cost = 0.0;
    Params fp = params;
    fp.feasibility_phase = false;
    const Solution f = solve(feas, fp);
    if (f.status != Status::Optimal) sol.status = Status::Infeasible;
  }
  return sol;
}

std::pair<double, CVector> leading_eigvec(const CMatrix& S) {
  const Eigen::Index n = S.rows();
  if (n == 0 || S.cols() != n) throw std::invalid_argument("leading_eigvec: expected a square matrix");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(S));
  const RVector& lam = es.eigenvalues();
  const double top = lam(n - 1);
  const double tol = 1e-10 * std::max(1.0, std::abs(top));
  Eigen::Index first = n - 1;
  while (first > 0 && top - lam(first - 1) <= tol) --first;
  CVector v;
  if (first == n - 1) {
    v = es.eigenvectors().col(n - 1);
  } else {
    const CMatrix U = es.eigenvectors().rightCols(n - first);
    for (Eigen::Index i = 0; i < n; ++i) {
      const CVector p = U * U.row(i).adjoint();
      if (p.norm() > 1e-8) {
        v = p;
        break;
      }
    }
  }
  v.normalize();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(v[i]) > 1e-12) {
      v *= std::conj(v[i]) / std::abs(v[i]);
      v[i] = std::abs(v[i]);
      break;
    }
  }
  return {top, v};
}

double rank_one_residual(const CMatrix& S) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(S), Eigen::EigenvaluesOnly);
  const RVector sv = es.eigenvalues().cwiseAbs();
  const double spectral = sv.maxCoeff();
  return (sv.sum() - spectral) / std::max(spectral, 1e-300);
}

namespace {

void write_matrix(std::ostream& os, const CMatrix& A) {
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
      if (j > 0) os << ',';
      os << fmt_double(A(i, j).real()) << ',' << fmt_double(A(i, j).imag());
    }
    os << '\n';
  }
}

std::string next_line(std::istream& is) {
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    return line;
  }
  throw ParseError("sdp problem: unexpected end of input");
}

CMatrix read_matrix(std::istream& is, int n) {
  CMatrix A(n, n);
  for (int i = 0; i < n; ++i) {
    const auto cols = split_csv_line(next_line(is));
    if (cols.size() != static_cast<std::size_t>(2 * n)) {
      throw ParseError("sdp problem: matrix row " + std::to_string(i) + " has " +
                       std::to_string(cols.size()) + " values, expected " + std::to_string(2 * n));
    }
    for (int j = 0; j < n; ++j) {
      try {
        A(i, j) = cplx(std::stod(cols[2 * j]), std::stod(cols[2 * j + 1]));
      } catch (const std::logic_error&) {
        throw ParseError("sdp problem: malformed number in matrix row " + std::to_string(i));
      }
    }
  }
  return A;
}

}  // namespace

void write_problem(std::ostream& os, const Problem& p) {
  os << "lcris-sdp,1\n";
  os << "dim," << p.dim << '\n';
  os << "margin," << (p.has_margin ? 1 : 0) << ',' << fmt_double(p.margin_cost) << '\n';
  os << "objective\n";
  write_matrix(os, p.C);
  os << "inequalities," << p.inequalities.size() << '\n';
  for (const auto& in : p.inequalities) {
    os << "inequality," << fmt_double(in.rhs) << ',' << fmt_double(in.margin_weight) << '\n';
    write_matrix(os, in.B);
  }
}

Problem read_problem(std::istream& is) {
  auto expect = [&](const std::string& key, std::size_t ncols) {
    const auto cols = split_csv_line(next_line(is));
    if (cols.empty() || cols[0] != key || cols.size() != ncols) {
      throw ParseError("sdp problem: expected '" + key + "' record");
    }
    return cols;
  };
  try {
    expect("lcris-sdp", 2);
    Problem p;
    p.dim = std::stoi(expect("dim", 2)[1]);
    if (p.dim < 1) throw ParseError("sdp problem: dim must be >= 1");
    const auto mc = expect("margin", 3);
    p.has_margin = std::stoi(mc[1]) != 0;
    p.margin_cost = std::stod(mc[2]);
    expect("objective", 1);
    p.C = read_matrix(is, p.dim);
    const int count = std::stoi(expect("inequalities", 2)[1]);
    for (int i = 0; i < count; ++i) {
      const auto h = expect("inequality", 3);
      Inequality in;
      in.rhs = std::stod(h[1]);
      in.margin_weight = std::stod(h[2]);
      in.B = read_matrix(is, p.dim);
      p.inequalities.push_back(std::move(in));
    }
    return p;
  } catch (const std::logic_error& e) {
    throw ParseError(std::string("sdp problem: malformed value (") + e.what() + ")");
  }
}

}  // namespace lcris::sdp
