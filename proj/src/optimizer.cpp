// SPDX-License-Identifier: Apache-2.0
#include "lcris/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "lcris/errors.hpp"
#include "lcris/sdp.hpp"

namespace lcris {

namespace {

double re_trace_product(const CMatrix& A, const CMatrix& B) {
  return (A.array() * B.transpose().array()).sum().real();
}

double quad_value(const CVector& w, const CMatrix& S) {
  const cplx v = w.dot(S * w);
  if (std::abs(v.imag()) > 1e-9 * (1.0 + std::abs(v.real()))) {
    throw std::logic_error("gamma_update: quadratic form has a non-negligible imaginary part");
  }
  return v.real();
}

}  // namespace

Experiment make_experiment(const ScenarioConfig& config) {
  Experiment exp;
  exp.config = config;
  exp.grid = build_subcarriers(config);
  exp.user_points = discretize_region(config.user_region, config.user_resolution);
  exp.eve_points = discretize_region(config.eve_region, config.eve_resolution);
  exp.channels = build_los_channels(config, exp.grid, exp.user_points, exp.eve_points);
  return exp;
}

CVector beamformer_lemma1(const ScenarioConfig& config) {
  const CVector a = steering_bs(config.ris_position, config.carrier_hz, config.bs_array,
                                config.bs_position);
  return std::sqrt(config.tx_power_watt() / static_cast<double>(a.size())) * a;
}

std::size_t DesignModel::num_triples() const {
  std::size_t n = 0;
  for (int k = 0; k < num_subcarriers(); ++k) n += user_factors[k].size() * eve_factors[k].size();
  return n;
}

DesignModel build_design_model(const ChannelSet& channels, const std::vector<double>& beta,
                               const CVector& q) {
  if (static_cast<int>(beta.size()) != channels.num_subcarriers()) {
    throw std::invalid_argument("build_design_model: one beta per subcarrier required");
  }
  DesignModel m;
  m.beta = beta;
  for (int k = 0; k < channels.num_subcarriers(); ++k) {
    auto& fu = m.user_factors.emplace_back();
    for (const auto& h : channels.hr_user[k]) {
      fu.push_back(quad_factor(h, channels.ht[k], q, channels.noise_power));
    }
    auto& fe = m.eve_factors.emplace_back();
    for (const auto& h : channels.hr_eve[k]) {
      fe.push_back(quad_factor(h, channels.ht[k], q, channels.noise_power));
    }
  }
  m.dim = channels.ht.empty() ? 0 : static_cast<int>(channels.ht.front().rows());
  return m;
}

std::vector<ConstraintMatrix> build_constraint_matrices(double gamma, const DesignModel& model) {
  if (gamma < 0.0) throw std::domain_error("build_constraint_matrices: gamma must be >= 0");
  std::vector<ConstraintMatrix> out;
  out.reserve(model.num_triples());
  for (int k = 0; k < model.num_subcarriers(); ++k) {
    const auto& fu = model.user_factors[k];
    const auto& fe = model.eve_factors[k];
    for (std::size_t u = 0; u < fu.size(); ++u) {
      const CMatrix Au = fu[u] * fu[u].adjoint();
      for (std::size_t e = 0; e < fe.size(); ++e) {
        ConstraintMatrix c;
        c.A = Au - gamma * (fe[e] * fe[e].adjoint());
        c.user = static_cast<int>(u);
        c.eve = static_cast<int>(e);
        c.k = k;
        out.push_back(std::move(c));
      }
    }
  }
  return out;
}

HadamardLinearization hadamard_linearize(const CMatrix& S_ref, double beta_k) {
  const Eigen::Index n = S_ref.rows();
  HadamardLinearization lin;
  if (beta_k == 1.0) {
    lin.value = S_ref;
    lin.slope = CMatrix::Ones(n, n);
    return lin;
  }
  lin.value.resize(n, n);
  lin.slope.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const cplx z = S_ref(i, j);
      const double r = std::abs(z);
      if (i != j && r < 1e-9) {
        lin.value(i, j) = 0.0;
        lin.slope(i, j) = 0.0;
        continue;
      }
      const double arg = std::arg(z);
      lin.value(i, j) = std::polar(std::pow(r, beta_k), beta_k * arg);
      lin.slope(i, j) = beta_k * std::polar(std::pow(r, beta_k - 1.0), (beta_k - 1.0) * arg);
    }
  }
  return lin;
}

HadamardLinearization hadamard_linearize(const CMatrix& S_ref, double beta_k,
                                         const RVector& reference_phases) {
  const Eigen::Index n = S_ref.rows();
  if (reference_phases.size() != n) {
    throw std::invalid_argument("hadamard_linearize: one reference phase per element required");
  }
  HadamardLinearization lin;
  lin.value.resize(n, n);
  lin.slope.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const cplx z = S_ref(i, j);
      const double r = std::abs(z);
      if (i != j && r < 1e-9) {
        lin.value(i, j) = 0.0;
        lin.slope(i, j) = 0.0;
        continue;
      }
      const double target = reference_phases[i] - reference_phases[j];
      double arg = std::arg(z);
      arg += kTwoPi * std::round((target - arg) / kTwoPi);
      lin.value(i, j) = std::polar(std::pow(r, beta_k), beta_k * arg);
      lin.slope(i, j) = beta_k * std::polar(std::pow(r, beta_k - 1.0), (beta_k - 1.0) * arg);
    }
  }
  return lin;
}

CMatrix penalty_objective(const CMatrix& S_ref, double eta) {
  if (!(eta > 0.0)) throw std::domain_error("penalty_objective: eta must be > 0");
  const CVector u = sdp::leading_eigvec(S_ref).second;
  return eta * u * u.adjoint();
}

double gamma_update(const std::vector<CMatrix>& S_k, const DesignModel& model) {
  if (static_cast<int>(S_k.size()) != model.num_subcarriers()) {
    throw std::invalid_argument("gamma_update: one lifted matrix per subcarrier required");
  }
  double gamma = std::numeric_limits<double>::infinity();
  for (int k = 0; k < model.num_subcarriers(); ++k) {
    double num = std::numeric_limits<double>::infinity();
    double den = 0.0;
    for (const auto& w : model.user_factors[k]) num = std::min(num, 1.0 + quad_value(w, S_k[k]));
    for (const auto& w : model.eve_factors[k]) den = std::max(den, 1.0 + quad_value(w, S_k[k]));
    if (!model.user_factors[k].empty() && !model.eve_factors[k].empty()) {
      gamma = std::min(gamma, num / den);
    }
  }
  return gamma;
}

PhaseProfile extract_profile(const CMatrix& S_c) {
  const CVector u = sdp::leading_eigvec(S_c).second;
  RVector omega(u.size());
  for (Eigen::Index n = 0; n < u.size(); ++n) {
    omega[n] = std::abs(u[n]) < 1e-9 ? 0.0 : wrap_phase(std::arg(u[n]));
  }
  return PhaseProfile(omega);
}

CMatrix lifted_from_profile(const PhaseProfile& profile, double beta_k) {
  const CVector s = reflect_coeffs(profile, beta_k);
  return s * s.adjoint();
}

const char* to_string(Method m) {
  switch (m) {
    case Method::Proposed: return "proposed";
    case Method::Bench1: return "bench1";
    case Method::Bench2: return "bench2";
    case Method::Bench3: return "bench3";
  }
  return "unknown";
}

Method method_from_string(const std::string& name) {
  for (Method m : {Method::Proposed, Method::Bench1, Method::Bench2, Method::Bench3}) {
    if (name == to_string(m)) return m;
  }
  throw std::invalid_argument("unknown method '" + name + "'");
}

namespace {

std::vector<CMatrix> lifted_all(const PhaseProfile& profile, const DesignModel& model) {
  std::vector<CMatrix> out;
  for (double b : model.beta) out.push_back(lifted_from_profile(profile, b));
  return out;
}

// Largest coherent SNR any single location can reach; used to put the
// margin on the same scale as the rank-one penalty.
double snr_reference(const DesignModel& model) {
  double ref = 0.0;
  for (const auto& fk : model.user_factors) {
    for (const auto& w : fk) ref = std::max(ref, std::pow(w.cwiseAbs().sum(), 2));
  }
  return ref > 0.0 ? ref : 1.0;
}

sdp::Problem inner_problem(const DesignModel& model, const std::vector<ConstraintMatrix>& cons,
                           const CMatrix& S_ref, double gamma, double eta,
                           const SolverParams& params, double snr_ref) {
  sdp::Problem p;
  p.dim = model.dim;
  p.C = penalty_objective(S_ref, eta);
  const RVector ref = extract_profile(S_ref).omega_c();
  std::vector<HadamardLinearization> lin;
  for (double b : model.beta) lin.push_back(hadamard_linearize(S_ref, b, ref));
  double shift = 0.0;
  for (const auto& c : cons) {
    const auto& L = lin[static_cast<std::size_t>(c.k)];
    sdp::Inequality in;
    const CMatrix B = c.A.cwiseProduct(L.slope.transpose());
    in.B = 0.5 * (B + B.adjoint());
    in.rhs = gamma - 1.0 - re_trace_product(c.A, L.value) + re_trace_product(in.B, S_ref);
    shift = std::max(shift, in.rhs + in.B.cwiseAbs().sum());
    p.inequalities.push_back(std::move(in));
  }
  if (params.margin_objective) {
    // tau = shift + worst linearized slack; the shift keeps tau = 0 feasible.
    shift += 1.0;
    for (auto& in : p.inequalities) {
      in.rhs -= shift;
      in.margin_weight = 1.0;
    }
    p.has_margin = true;
    p.margin_cost = static_cast<double>(model.dim) / snr_ref;
  }
  return p;
}

}  // namespace

AlgorithmOutput run_penalty_ao(const DesignModel& model, const SolverParams& params,
                               std::uint64_t seed,
                               const std::function<double(const PhaseProfile&)>& evaluate) {
  if (model.dim < 1) throw std::invalid_argument("run_penalty_ao: empty design model");
  using clock = std::chrono::steady_clock;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  RVector phases(model.dim);
  for (Eigen::Index n = 0; n < phases.size(); ++n) phases[n] = kTwoPi * unif(rng);
  const CVector s0 = reflect_coeffs(phases);
  CMatrix S_c = s0 * s0.adjoint();

  sdp::Params sp;
  sp.feasibility_tol = params.feasibility_tol;
  sp.gap_tol = params.objective_tol;
  sp.max_iters = params.sdp_max_iters;

  const double snr_ref = snr_reference(model);
  AlgorithmOutput out;
  PhaseProfile best = extract_profile(S_c);
  double best_alpha = evaluate(best);
  double gamma = 1.0;

  for (int j = 1; j <= params.max_outer; ++j) {
    auto cons = build_constraint_matrices(gamma, model);
    double eta = params.eta0;
    for (int i = 1; i <= params.max_inner;) {
      const auto t0 = clock::now();
      const sdp::Problem prob = inner_problem(model, cons, S_c, gamma, eta, params, snr_ref);
      const sdp::Solution sol = sdp::solve(prob, sp);
      if (!params.margin_objective && sol.status == sdp::Status::Infeasible) {
        if (gamma <= 1.0) {
          throw SolverAbort("inner SDP infeasible at gamma = 1 (outer " + std::to_string(j) +
                            ", inner " + std::to_string(i) + ")");
        }
        gamma = std::max(1.0, 0.5 * (gamma + 1.0));
        cons = build_constraint_matrices(gamma, model);
        continue;
      }
      S_c = sol.S;
      IterationLog entry;
      entry.outer = j;
      entry.inner = i;
      entry.eta = eta;
      entry.gamma = gamma;
      entry.rank_residual = sdp::rank_one_residual(S_c);
      entry.inner_objective = sol.objective;
      entry.wall_ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
      out.log.push_back(entry);
      eta *= params.eta_growth;
      ++i;
    }
    const PhaseProfile profile = extract_profile(S_c);
    gamma = std::max(1.0, gamma_update(lifted_all(profile, model), model));
    out.gamma_trajectory.push_back(gamma);
    const double alpha = evaluate(profile);
    if (alpha >= best_alpha) {
      best_alpha = alpha;
      best = profile;
    }
  }
  out.profile = best;
  out.gamma_final = std::max(1.0, gamma_update(lifted_all(best, model), model));
  out.lifted = S_c;
  return out;
}

namespace {

DesignResult design(Method method, const DesignModel& model, const Experiment& exp,
                    const CVector& q) {
  auto evaluate = [&](const PhaseProfile& p) {
    return worst_case_report(p, q, exp.channels, exp.grid).alpha;
  };
  AlgorithmOutput ao = run_penalty_ao(model, exp.config.solver, exp.config.rng_seed, evaluate);
  DesignResult r;
  r.method = method;
  r.profile = ao.profile;
  r.gamma_final = ao.gamma_final;
  r.report = worst_case_report(r.profile, q, exp.channels, exp.grid);
  r.alpha = r.report.alpha;
  r.log = std::move(ao.log);
  r.gamma_trajectory = std::move(ao.gamma_trajectory);
  r.lifted = std::move(ao.lifted);
  return r;
}

}  // namespace

DesignResult run_algorithm1(const Experiment& exp, const CVector& q) {
  return design(Method::Proposed, build_design_model(exp.channels, exp.grid.beta_k, q), exp, q);
}

DesignResult benchmark1(const Experiment& exp, const CVector& q) {
  const std::vector<double> ones(exp.grid.beta_k.size(), 1.0);
  return design(Method::Bench1, build_design_model(exp.channels, ones, q), exp, q);
}

DesignResult benchmark2(const Experiment& exp, const CVector& q) {
  const SubcarrierGrid center = center_only_grid(exp.config);
  const ChannelSet ch = build_los_channels(exp.config, center, exp.user_points, exp.eve_points);
  return design(Method::Bench2, build_design_model(ch, center.beta_k, q), exp, q);
}

DesignResult benchmark3(const Experiment& exp, const CVector& q) {
  const ChannelSet ch = build_los_channels(exp.config, exp.grid, {exp.config.user_region.center()},
                                           {exp.config.eve_region.center()});
  return design(Method::Bench3, build_design_model(ch, exp.grid.beta_k, q), exp, q);
}

DesignResult run_method(Method method, const Experiment& exp, const CVector& q) {
  switch (method) {
    case Method::Proposed: return run_algorithm1(exp, q);
    case Method::Bench1: return benchmark1(exp, q);
    case Method::Bench2: return benchmark2(exp, q);
    case Method::Bench3: return benchmark3(exp, q);
  }
  throw std::invalid_argument("run_method: unknown method");
}

}  // namespace lcris
