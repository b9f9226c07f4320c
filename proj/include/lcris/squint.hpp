// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "lcris/types.hpp"

namespace lcris {

// Fixed single-antenna receiver seen by a ULA transmitter at the origin
// (array along y, broadside along x).
struct SquintGeometry {
  double distance_m = 20.0;
  double angle_deg = 30.0;  // from broadside
  double spacing_m = 0.0;   // 0: half wavelength at the center frequency
  // Off by default so the curve isolates the array effect.
  bool frequency_dependent_pathloss = false;
};

struct SquintCurve {
  std::vector<double> x;
  std::vector<double> ratio_db;
};

// Lower clamp for minimum ratios: exact nulls inside the band are reported here.
inline constexpr double kSquintFloorDb = -100.0;

// Samples are placed at f_c + (i - (samples-1)/2) * bandwidth / (samples-1).
SquintCurve snr_ratio_curve(int num_elements, double f_c, double bandwidth, int samples,
                            const SquintGeometry& geometry = {});

// Minimum over the band (sampled, then refined between samples) per element count.
SquintCurve min_ratio_vs_elements(const std::vector<int>& element_counts, double f_c,
                                  double bandwidth, int samples,
                                  const SquintGeometry& geometry = {});

}  // namespace lcris
