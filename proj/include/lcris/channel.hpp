// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

#include "lcris/scene.hpp"
#include "lcris/types.hpp"

namespace lcris {

// sigma_n^2 = W_k * N_0 * N_f, returned in watts.
double noise_power(double subcarrier_bw_hz, double n0_dbm_hz, double nf_db);

// rho_k * (d0 / d)^exponent with rho_k = (c / (4 pi f))^2 and d0 = 1 m.
double pathloss(double distance_m, double f_hz, double exponent);

// Far-field (planar wave) steering vector of an array centered at
// array_position toward direction_point.
CVector steering_bs(const Vec3& direction_point, double f_hz, const ArraySpec& spec,
                    const Vec3& array_position);

// Near-field (spherical wave) steering vector, phase-referenced to the
// array center.
CVector steering_ris_nearfield(const Vec3& point, double f_hz, const ArraySpec& spec,
                               const Vec3& array_position);

// BS -> RIS LOS channel, N x N_t, rank one.
CMatrix los_channel_ht(double f_hz, const ScenarioConfig& config);

// RIS -> receiver LOS channel. Users and eavesdroppers share the same law.
CVector los_channel_hr(const Vec3& point, Role role, double f_hz, const ScenarioConfig& config);

// Rician mixture of a LOS component with i.i.d. CN scatter whose per-entry
// variance equals the mean square of the LOS entries.
CMatrix rician_sample(const CMatrix& los, double k_factor, std::mt19937_64& rng);
CVector rician_sample(const CVector& los, double k_factor, std::mt19937_64& rng);

// Independent, reproducible stream seed for (seed, a, b, c, d).
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                          std::uint64_t c = 0, std::uint64_t d = 0);

// All channels needed to evaluate or design on a point set.
// hr_user[k][u], hr_eve[k][e]; direct links are identically zero and not stored.
struct ChannelSet {
  std::vector<double> frequencies;
  std::vector<CMatrix> ht;
  std::vector<std::vector<CVector>> hr_user;
  std::vector<std::vector<CVector>> hr_eve;
  std::vector<Vec3> user_points;
  std::vector<Vec3> eve_points;
  double noise_power = 0.0;

  int num_subcarriers() const { return static_cast<int>(frequencies.size()); }
};

ChannelSet build_los_channels(const ScenarioConfig& config, const SubcarrierGrid& grid,
                              const std::vector<Vec3>& user_points,
                              const std::vector<Vec3>& eve_points);

// One Rician realization; streams are split per (draw, link, subcarrier, location)
// so the result does not depend on evaluation order.
ChannelSet build_rician_channels(const ScenarioConfig& config, const SubcarrierGrid& grid,
                                 const std::vector<Vec3>& user_points,
                                 const std::vector<Vec3>& eve_points, std::uint64_t seed,
                                 std::uint64_t draw);

// Debug dump: k, f_hz, role, x, y, z, norm2
void write_channel_norms(std::ostream& os, const ChannelSet& channels);

}  // namespace lcris
