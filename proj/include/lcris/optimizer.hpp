// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lcris/channel.hpp"
#include "lcris/lc_model.hpp"
#include "lcris/scene.hpp"
#include "lcris/secrecy.hpp"
#include "lcris/types.hpp"

namespace lcris {

// Everything a design run needs: the scenario, its subcarriers, the location
// grids and LOS channels on them.
struct Experiment {
  ScenarioConfig config;
  SubcarrierGrid grid;
  std::vector<Vec3> user_points;
  std::vector<Vec3> eve_points;
  ChannelSet channels;
};

Experiment make_experiment(const ScenarioConfig& config);

// q = sqrt(P_t / N_t) a_BS(p_RIS, f_c), so ||q||^2 = P_t.
CVector beamformer_lemma1(const ScenarioConfig& config);

// The optimizer's view of the problem: rank-one SNR factors per design
// subcarrier and location, and the beta_k it assumes for each subcarrier.
struct DesignModel {
  int dim = 0;
  std::vector<double> beta;
  std::vector<std::vector<CVector>> user_factors;  // [k][u]
  std::vector<std::vector<CVector>> eve_factors;   // [k][e]

  int num_subcarriers() const { return static_cast<int>(beta.size()); }
  std::size_t num_triples() const;
};

DesignModel build_design_model(const ChannelSet& channels, const std::vector<double>& beta,
                               const CVector& q);

struct ConstraintMatrix {
  CMatrix A;  // A_k^u(p_u) - gamma A_k^e(p_e)
  int user = 0;
  int eve = 0;
  int k = 0;
};

std::vector<ConstraintMatrix> build_constraint_matrices(double gamma, const DesignModel& model);

struct HadamardLinearization {
  CMatrix value;  // S_ref^{o beta}
  CMatrix slope;  // beta * S_ref^{o (beta - 1)}
};

// Principal-branch elementwise power and its first-order slope around S_ref.
// Off-diagonal entries with |z| < 1e-9 get value 0 and slope 0.
HadamardLinearization hadamard_linearize(const CMatrix& S_ref, double beta_k);

// Same expansion with each entry's argument taken on the branch closest to
// reference_phases[i] - reference_phases[j], so that at a rank-one S_ref built
// from those phases the value equals the phase-law matrix exp(j beta_k (w_i - w_j)).
// This is the form the optimizer linearizes with.
HadamardLinearization hadamard_linearize(const CMatrix& S_ref, double beta_k,
                                         const RVector& reference_phases);

// eta * u u^H with u the leading eigenvector of S_ref.
CMatrix penalty_objective(const CMatrix& S_ref, double eta);

// Closed-form gamma: min over (u, e, k) of (tr(A^u S_k) + 1) / (tr(A^e S_k) + 1).
double gamma_update(const std::vector<CMatrix>& S_k, const DesignModel& model);

// Phases of the leading eigenvector, referenced to its first non-negligible entry.
PhaseProfile extract_profile(const CMatrix& S_c);

// s_k s_k^H with s_k = exp(j beta_k omega_c).
CMatrix lifted_from_profile(const PhaseProfile& profile, double beta_k);

enum class Method { Proposed, Bench1, Bench2, Bench3 };

const char* to_string(Method m);
Method method_from_string(const std::string& name);

struct IterationLog {
  int outer = 0;
  int inner = 0;
  double eta = 0.0;
  double gamma = 0.0;
  double rank_residual = 0.0;
  double inner_objective = 0.0;
  double wall_ms = 0.0;
};

struct DesignResult {
  Method method = Method::Proposed;
  PhaseProfile profile;
  double alpha = 0.0;       // evaluated worst-case secrecy rate, bits/symbol
  double gamma_final = 1.0;  // optimizer's own closed-form gamma at the returned profile
  SecrecyReport report;     // evaluation on the full grids and all subcarriers
  std::vector<IterationLog> log;
  std::vector<double> gamma_trajectory;
  CMatrix lifted;  // final S_c iterate
};

// Core loop: alternating gamma / penalized-SDP updates on the given model.
// evaluate(profile) returns the evaluated alpha used for best-so-far tracking.
struct AlgorithmOutput {
  PhaseProfile profile;
  double gamma_final = 1.0;
  std::vector<IterationLog> log;
  std::vector<double> gamma_trajectory;
  CMatrix lifted;
};

AlgorithmOutput run_penalty_ao(const DesignModel& model, const SolverParams& params,
                               std::uint64_t seed,
                               const std::function<double(const PhaseProfile&)>& evaluate);

DesignResult run_algorithm1(const Experiment& exp, const CVector& q);
DesignResult benchmark1(const Experiment& exp, const CVector& q);
DesignResult benchmark2(const Experiment& exp, const CVector& q);
DesignResult benchmark3(const Experiment& exp, const CVector& q);
DesignResult run_method(Method method, const Experiment& exp, const CVector& q);

}  // namespace lcris
