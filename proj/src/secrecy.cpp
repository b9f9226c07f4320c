// SPDX-License-Identifier: Apache-2.0
#include "lcris/secrecy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "lcris/csv_io.hpp"

namespace lcris {

CVector effective_channel(const CVector& hr, const CVector& coeffs, const CMatrix& ht) {
  if (hr.size() != coeffs.size() || ht.rows() != hr.size()) {
    throw std::invalid_argument("effective_channel: dimension mismatch");
  }
  return ht.adjoint() * coeffs.conjugate().cwiseProduct(hr);
}

double snr(const CVector& h_eff, const CVector& q, double noise) {
  if (h_eff.size() != q.size()) throw std::invalid_argument("snr: dimension mismatch");
  return std::norm(h_eff.dot(q)) / noise;
}

double secrecy_rate(double snr_u, double snr_e) {
  return std::max(0.0, std::log2(1.0 + snr_u) - std::log2(1.0 + snr_e));
}

CVector quad_factor(const CVector& hr, const CMatrix& ht, const CVector& q, double noise) {
  if (ht.rows() != hr.size() || ht.cols() != q.size()) {
    throw std::invalid_argument("quad_factor: dimension mismatch");
  }
  const CVector g = ht * q;
  return hr.cwiseProduct(g.conjugate()) / std::sqrt(noise);
}

SnrQuadratic quad_matrix(const CVector& hr, const CMatrix& ht, const CVector& q, double noise) {
  const CVector w = quad_factor(hr, ht, q, noise);
  SnrQuadratic out;
  out.matrix = w * w.adjoint();
  return out;
}

SubcarrierSnrs subcarrier_snrs(const CVector& coeffs, const CVector& q, const ChannelSet& channels,
                               int k) {
  const CVector t = coeffs.cwiseProduct(channels.ht[k] * q);
  SubcarrierSnrs out;
  for (const auto& h : channels.hr_user[k]) out.user.push_back(std::norm(h.dot(t)) / channels.noise_power);
  for (const auto& h : channels.hr_eve[k]) out.eve.push_back(std::norm(h.dot(t)) / channels.noise_power);
  return out;
}

namespace {

SecrecyReport assemble(const std::vector<SubcarrierSnrs>& per_k) {
  SecrecyReport rep;
  rep.alpha = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < per_k.size(); ++k) {
    double worst = std::numeric_limits<double>::infinity();
    const auto& s = per_k[k];
    for (std::size_t u = 0; u < s.user.size(); ++u) {
      for (std::size_t e = 0; e < s.eve.size(); ++e) {
        const double sr = secrecy_rate(s.user[u], s.eve[e]);
        rep.entries.push_back({static_cast<int>(k), static_cast<int>(u), static_cast<int>(e),
                               s.user[u], s.eve[e], sr});
        worst = std::min(worst, sr);
      }
    }
    rep.worst_per_k.push_back(worst);
    rep.alpha = std::min(rep.alpha, worst);
  }
  return rep;
}

}  // namespace

SecrecyReport worst_case_report(const PhaseProfile& profile, const CVector& q,
                                const ChannelSet& channels, const SubcarrierGrid& grid) {
  if (grid.size() != channels.num_subcarriers()) {
    throw std::invalid_argument("worst_case_report: grid and channel subcarrier counts differ");
  }
  std::vector<SubcarrierSnrs> per_k;
  for (int k = 0; k < grid.size(); ++k) {
    per_k.push_back(subcarrier_snrs(reflect_coeffs(profile, grid.beta_k[k]), q, channels, k));
  }
  return assemble(per_k);
}

SecrecyReport rician_report(const PhaseProfile& profile, const CVector& q,
                            const ScenarioConfig& config, const SubcarrierGrid& grid,
                            const std::vector<Vec3>& user_points,
                            const std::vector<Vec3>& eve_points, int draws, std::uint64_t seed) {
  if (draws < 1) throw std::invalid_argument("rician_report: draws must be >= 1");
  std::vector<SubcarrierSnrs> acc(static_cast<std::size_t>(grid.size()));
  for (auto& a : acc) {
    a.user.assign(user_points.size(), 0.0);
    a.eve.assign(eve_points.size(), 0.0);
  }
  for (int d = 0; d < draws; ++d) {
    const ChannelSet cs = build_rician_channels(config, grid, user_points, eve_points, seed,
                                                static_cast<std::uint64_t>(d));
    for (int k = 0; k < grid.size(); ++k) {
      const auto s = subcarrier_snrs(reflect_coeffs(profile, grid.beta_k[k]), q, cs, k);
      for (std::size_t u = 0; u < s.user.size(); ++u) acc[k].user[u] += s.user[u] / draws;
      for (std::size_t e = 0; e < s.eve.size(); ++e) acc[k].eve[e] += s.eve[e] / draws;
    }
  }
  return assemble(acc);
}

void write_report_csv(std::ostream& os, const SecrecyReport& report, const ChannelSet& channels,
                      const std::string& comment) {
  if (!comment.empty()) os << comment << '\n';
  os << "k,f_hz,ux,uy,uz,ex,ey,ez,snr_u_db,snr_e_db,sr_bits\n";
  for (const auto& r : report.entries) {
    const Vec3& pu = channels.user_points.at(static_cast<std::size_t>(r.user));
    const Vec3& pe = channels.eve_points.at(static_cast<std::size_t>(r.eve));
    os << r.k << ',' << fmt_double(channels.frequencies.at(static_cast<std::size_t>(r.k))) << ','
       << fmt_double(pu[0]) << ',' << fmt_double(pu[1]) << ',' << fmt_double(pu[2]) << ','
       << fmt_double(pe[0]) << ',' << fmt_double(pe[1]) << ',' << fmt_double(pe[2]) << ','
       << fmt_double(linear_to_db(r.snr_u)) << ',' << fmt_double(linear_to_db(r.snr_e)) << ','
       << fmt_double(r.sr) << '\n';
  }
}

}  // namespace lcris
