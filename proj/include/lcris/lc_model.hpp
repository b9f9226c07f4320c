// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <utility>
#include <vector>

#include "lcris/types.hpp"

namespace lcris {

// Liquid-crystal phase-shifter cell. The cell length is calibrated so the
// differential phase range at the center frequency is exactly 2*pi.
struct LcCellParams {
  double length_m = 0.0;
  double eps_parallel = 3.3;
  double eps_perp = 2.5;
  double beta = 2.4;

  double delta_n_max() const;
  static LcCellParams calibrated(double eps_parallel, double eps_perp, double beta, double f_c);
};

double max_phase_range(double f, const LcCellParams& params, double f_c);

// beta_k = 1 + beta * (f_k / f_c - 1)
double scale_factor(double f_k, double f_c, double beta);

// Reference phases at the center frequency, each in [0, 2*pi).
class PhaseProfile {
 public:
  PhaseProfile() = default;
  explicit PhaseProfile(RVector omega_c);  // throws std::domain_error outside [0, 2*pi)

  // Wraps arbitrary real phases into [0, 2*pi).
  static PhaseProfile wrapped(const RVector& phases);

  const RVector& omega_c() const { return omega_c_; }
  int size() const { return static_cast<int>(omega_c_.size()); }

 private:
  RVector omega_c_;
};

double wrap_phase(double x);

// beta_k * omega_c, left unwrapped.
RVector phases_at(const PhaseProfile& profile, double beta_k);

CVector reflect_coeffs(const RVector& phases);

// Convenience: reflect_coeffs(phases_at(profile, beta_k)).
CVector reflect_coeffs(const PhaseProfile& profile, double beta_k);

// Piecewise-linear monotone voltage-to-phase map h(v).
struct VoltagePhaseCurve {
  std::vector<std::pair<double, double>> breakpoints;  // (volts, radians)

  void validate() const;
};

double voltage_to_phase(double volts, const VoltagePhaseCurve& curve);

// Two-column CSV (volts, radians); '#' lines and a non-numeric header row are skipped.
VoltagePhaseCurve load_voltage_curve(const std::filesystem::path& path);

}  // namespace lcris
