// SPDX-License-Identifier: Apache-2.0
#include "lcris/squint.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lcris {

namespace {

// |h_f^H h_c|^2 / N^2 for a far-field ULA; offset = f - f_c.
double ratio_at(int num_elements, double f_c, double offset, const SquintGeometry& g) {
  const double spacing = g.spacing_m > 0.0 ? g.spacing_m : 0.5 * kSpeedOfLight / f_c;
  const double sin_theta = std::sin(g.angle_deg * kPi / 180.0);
  const double k_off = kTwoPi * offset / kSpeedOfLight * sin_theta * spacing;
  cplx acc = 0.0;
  for (int n = 0; n < num_elements; ++n) {
    const double pos = n - 0.5 * (num_elements - 1);
    acc += std::polar(1.0, k_off * pos);
  }
  const double nn = static_cast<double>(num_elements);
  double r = std::norm(acc) / (nn * nn);
  if (g.frequency_dependent_pathloss) {
    const double scale = f_c / (f_c + offset);
    r *= scale * scale;
  }
  return r;
}

double to_db(double ratio) { return std::max(kSquintFloorDb, 10.0 * std::log10(ratio)); }

void check_args(int num_elements, double f_c, double bandwidth, int samples) {
  if (num_elements < 1) throw std::invalid_argument("squint: element count must be >= 1");
  if (samples < 2) throw std::invalid_argument("squint: samples must be >= 2");
  if (!(f_c > 0.0)) throw std::invalid_argument("squint: carrier must be > 0");
  if (bandwidth < 0.0 || bandwidth >= 2.0 * f_c) {
    throw std::invalid_argument("squint: bandwidth must be in [0, 2 f_c)");
  }
}

double sample_offset(int i, double bandwidth, int samples) {
  return (i - 0.5 * (samples - 1)) * bandwidth / (samples - 1);
}

// Golden-section search for the minimum ratio on [a, b].
double refine_min(int n, double f_c, double a, double b, const SquintGeometry& g) {
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = ratio_at(n, f_c, c, g);
  double fd = ratio_at(n, f_c, d, g);
  for (int it = 0; it < 80; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = ratio_at(n, f_c, c, g);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = ratio_at(n, f_c, d, g);
    }
  }
  return std::min(fc, fd);
}

}  // namespace

SquintCurve snr_ratio_curve(int num_elements, double f_c, double bandwidth, int samples,
                            const SquintGeometry& geometry) {
  check_args(num_elements, f_c, bandwidth, samples);
  SquintCurve curve;
  for (int i = 0; i < samples; ++i) {
    const double off = sample_offset(i, bandwidth, samples);
    curve.x.push_back(f_c + off);
    curve.ratio_db.push_back(to_db(ratio_at(num_elements, f_c, off, geometry)));
  }
  return curve;
}

SquintCurve min_ratio_vs_elements(const std::vector<int>& element_counts, double f_c,
                                  double bandwidth, int samples, const SquintGeometry& geometry) {
  SquintCurve curve;
  for (int n : element_counts) {
    check_args(n, f_c, bandwidth, samples);
    std::vector<double> offs;
    std::vector<double> vals;
    for (int i = 0; i < samples; ++i) {
      offs.push_back(sample_offset(i, bandwidth, samples));
      vals.push_back(ratio_at(n, f_c, offs.back(), geometry));
    }
    double best = *std::min_element(vals.begin(), vals.end());
    for (int i = 1; i + 1 < samples; ++i) {
      if (vals[i] <= vals[i - 1] && vals[i] <= vals[i + 1]) {
        best = std::min(best, refine_min(n, f_c, offs[i - 1], offs[i + 1], geometry));
      }
    }
    curve.x.push_back(n);
    curve.ratio_db.push_back(to_db(best));
  }
  return curve;
}

}  // namespace lcris
