// SPDX-License-Identifier: Apache-2.0
#include "lcris/lc_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "lcris/errors.hpp"

namespace lcris {

double LcCellParams::delta_n_max() const { return std::sqrt(eps_parallel) - std::sqrt(eps_perp); }

LcCellParams LcCellParams::calibrated(double eps_parallel, double eps_perp, double beta, double f_c) {
  LcCellParams p;
  p.eps_parallel = eps_parallel;
  p.eps_perp = eps_perp;
  p.beta = beta;
  const double dn = p.delta_n_max();
  if (!(dn > 0.0)) throw std::domain_error("LcCellParams: eps_parallel must exceed eps_perp");
  p.length_m = kSpeedOfLight / (dn * f_c);
  return p;
}

double max_phase_range(double f, const LcCellParams& params, double f_c) {
  if (!(f > 0.0)) throw std::domain_error("max_phase_range: frequency must be > 0");
  return kTwoPi * params.length_m * params.delta_n_max() * (f_c + params.beta * (f - f_c)) /
         kSpeedOfLight;
}

double scale_factor(double f_k, double f_c, double beta) {
  if (!(f_k > 0.0)) throw std::domain_error("scale_factor: frequency must be > 0");
  return 1.0 + beta * (f_k / f_c - 1.0);
}

double wrap_phase(double x) {
  double r = std::fmod(x, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;  // -tiny + 2 pi rounds up to 2 pi
  return r;
}

PhaseProfile::PhaseProfile(RVector omega_c) : omega_c_(std::move(omega_c)) {
  for (Eigen::Index n = 0; n < omega_c_.size(); ++n) {
    const double w = omega_c_[n];
    if (!(w >= 0.0 && w < kTwoPi)) {
      throw std::domain_error("PhaseProfile: entry " + std::to_string(n) + " outside [0, 2pi)");
    }
  }
}

PhaseProfile PhaseProfile::wrapped(const RVector& phases) {
  return PhaseProfile(phases.unaryExpr([](double x) { return wrap_phase(x); }).eval());
}

RVector phases_at(const PhaseProfile& profile, double beta_k) { return beta_k * profile.omega_c(); }

CVector reflect_coeffs(const RVector& phases) {
  CVector out(phases.size());
  for (Eigen::Index n = 0; n < phases.size(); ++n) out[n] = std::polar(1.0, phases[n]);
  return out;
}

CVector reflect_coeffs(const PhaseProfile& profile, double beta_k) {
  return reflect_coeffs(phases_at(profile, beta_k));
}

void VoltagePhaseCurve::validate() const {
  if (breakpoints.empty()) throw std::domain_error("voltage curve is empty");
  for (std::size_t i = 0; i < breakpoints.size(); ++i) {
    const auto [v, ph] = breakpoints[i];
    if (ph < 0.0 || ph > kTwoPi) throw std::domain_error("voltage curve phase outside [0, 2pi]");
    if (i > 0) {
      if (!(v > breakpoints[i - 1].first)) {
        throw std::domain_error("voltage curve voltages must be strictly increasing");
      }
      if (ph < breakpoints[i - 1].second) {
        throw std::domain_error("voltage curve phases must be non-decreasing");
      }
    }
  }
}

double voltage_to_phase(double volts, const VoltagePhaseCurve& curve) {
  const auto& pts = curve.breakpoints;
  if (pts.empty()) throw std::domain_error("voltage_to_phase: empty curve");
  if (volts <= pts.front().first) return pts.front().second;
  if (volts >= pts.back().first) return pts.back().second;
  auto hi = std::upper_bound(pts.begin(), pts.end(), volts,
                             [](double v, const auto& p) { return v < p.first; });
  auto lo = hi - 1;
  const double t = (volts - lo->first) / (hi->first - lo->first);
  return lo->second + t * (hi->second - lo->second);
}

VoltagePhaseCurve load_voltage_curve(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open voltage curve " + path.string());
  VoltagePhaseCurve curve;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double v = 0.0;
    double ph = 0.0;
    if (!(ss >> v >> ph)) {
      if (curve.breakpoints.empty()) continue;  // header row
      throw ParseError("voltage curve line " + std::to_string(lineno) + ": expected two numbers");
    }
    curve.breakpoints.emplace_back(v, ph);
  }
  curve.validate();
  return curve;
}

}  // namespace lcris
