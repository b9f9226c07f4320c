// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "lcris/channel.hpp"
#include "lcris/lc_model.hpp"
#include "lcris/scene.hpp"
#include "lcris/types.hpp"

namespace lcris {

// Column vector h_eff with h_eff^H = h_r^H diag(coeffs) H_t.
CVector effective_channel(const CVector& hr, const CVector& coeffs, const CMatrix& ht);

double snr(const CVector& h_eff, const CVector& q, double noise);

// [log2(1 + snr_u) - log2(1 + snr_e)]^+ in bits/symbol.
double secrecy_rate(double snr_u, double snr_e);

// Rank-one factor w of the SNR quadratic form: SNR = |w^H s|^2 = s^H (w w^H) s
// for s = reflect_coeffs(phases).
CVector quad_factor(const CVector& hr, const CMatrix& ht, const CVector& q, double noise);

struct SnrQuadratic {
  CMatrix matrix;
  int k = 0;
  Role role = Role::User;
  Vec3 location = Vec3::Zero();
};

SnrQuadratic quad_matrix(const CVector& hr, const CMatrix& ht, const CVector& q, double noise);

struct SecrecyEntry {
  int k = 0;
  int user = 0;
  int eve = 0;
  double snr_u = 0.0;
  double snr_e = 0.0;
  double sr = 0.0;
};

struct SecrecyReport {
  std::vector<SecrecyEntry> entries;  // ordered by (k, user, eve)
  std::vector<double> worst_per_k;
  double alpha = 0.0;
};

// Per-location SNRs for one subcarrier: snr_user[u], snr_eve[e].
struct SubcarrierSnrs {
  std::vector<double> user;
  std::vector<double> eve;
};

SubcarrierSnrs subcarrier_snrs(const CVector& coeffs, const CVector& q, const ChannelSet& channels,
                               int k);

// Exhaustive worst case over users x eves x subcarriers with the true beta_k law.
SecrecyReport worst_case_report(const PhaseProfile& profile, const CVector& q,
                                const ChannelSet& channels, const SubcarrierGrid& grid);

// Average-power evaluation over Rician draws: per-location SNRs are averaged
// over draws before forming the secrecy rate.
SecrecyReport rician_report(const PhaseProfile& profile, const CVector& q,
                            const ScenarioConfig& config, const SubcarrierGrid& grid,
                            const std::vector<Vec3>& user_points,
                            const std::vector<Vec3>& eve_points, int draws, std::uint64_t seed);

// columns: k, f_hz, ux, uy, uz, ex, ey, ez, snr_u_db, snr_e_db, sr_bits
void write_report_csv(std::ostream& os, const SecrecyReport& report, const ChannelSet& channels,
                      const std::string& comment);

}  // namespace lcris
