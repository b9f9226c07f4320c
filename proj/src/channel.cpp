// SPDX-License-Identifier: Apache-2.0
#include "lcris/channel.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "lcris/csv_io.hpp"

namespace lcris {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

template <typename M>
M rician_mix(const M& los, double k_factor, std::mt19937_64& rng) {
  if (k_factor < 0.0) throw std::domain_error("rician_sample: K-factor must be >= 0");
  const double mean_sq = los.size() > 0 ? los.squaredNorm() / static_cast<double>(los.size()) : 0.0;
  // CN(0, mean_sq): each real component has variance mean_sq / 2.
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5 * mean_sq));
  M scatter(los.rows(), los.cols());
  for (Eigen::Index j = 0; j < los.cols(); ++j) {
    for (Eigen::Index i = 0; i < los.rows(); ++i) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      scatter(i, j) = cplx(re, im);
    }
  }
  const double a = std::sqrt(k_factor / (k_factor + 1.0));
  const double b = std::sqrt(1.0 / (k_factor + 1.0));
  return (a * los + b * scatter).eval();
}

}  // namespace

double noise_power(double subcarrier_bw_hz, double n0_dbm_hz, double nf_db) {
  if (!(subcarrier_bw_hz > 0.0)) throw std::domain_error("noise_power: bandwidth must be > 0");
  return subcarrier_bw_hz * dbm_to_watt(n0_dbm_hz) * db_to_linear(nf_db);
}

double pathloss(double distance_m, double f_hz, double exponent) {
  if (!(distance_m > 0.0)) throw std::domain_error("pathloss: distance must be > 0");
  const double root = kSpeedOfLight / (4.0 * kPi * f_hz);
  constexpr double d0 = 1.0;
  return root * root * std::pow(d0 / distance_m, exponent);
}

CVector steering_bs(const Vec3& direction_point, double f_hz, const ArraySpec& spec,
                    const Vec3& array_position) {
  const Vec3 dir = direction_point - array_position;
  const double dist = dir.norm();
  if (!(dist > 0.0)) throw std::domain_error("steering_bs: direction point at the array center");
  const Vec3 u = dir / dist;
  const double k = kTwoPi * f_hz / kSpeedOfLight;
  const auto offsets = spec.element_offsets();
  CVector a(static_cast<Eigen::Index>(offsets.size()));
  for (std::size_t n = 0; n < offsets.size(); ++n) {
    a[static_cast<Eigen::Index>(n)] = std::polar(1.0, -k * u.dot(offsets[n]));
  }
  return a;
}

CVector steering_ris_nearfield(const Vec3& point, double f_hz, const ArraySpec& spec,
                               const Vec3& array_position) {
  const double k = kTwoPi * f_hz / kSpeedOfLight;
  const double ref = (point - array_position).norm();
  const auto offsets = spec.element_offsets();
  CVector a(static_cast<Eigen::Index>(offsets.size()));
  for (std::size_t n = 0; n < offsets.size(); ++n) {
    const double d = (point - (array_position + offsets[n])).norm();
    if (d < 1e-12) throw std::domain_error("steering_ris_nearfield: point coincides with an element");
    a[static_cast<Eigen::Index>(n)] = std::polar(1.0, -k * (d - ref));
  }
  return a;
}

CMatrix los_channel_ht(double f_hz, const ScenarioConfig& config) {
  const double d = (config.bs_position - config.ris_position).norm();
  const double c0 = std::sqrt(pathloss(d, f_hz, config.pathloss_exponents[1]));
  const CVector a_ris = steering_ris_nearfield(config.bs_position, f_hz, config.ris_array,
                                               config.ris_position);
  const CVector a_bs = steering_bs(config.ris_position, f_hz, config.bs_array, config.bs_position);
  return c0 * a_ris * a_bs.adjoint();
}

CVector los_channel_hr(const Vec3& point, Role /*role*/, double f_hz, const ScenarioConfig& config) {
  const double d = (point - config.ris_position).norm();
  const double gain = std::sqrt(pathloss(d, f_hz, config.pathloss_exponents[2]));
  return gain * steering_ris_nearfield(point, f_hz, config.ris_array, config.ris_position);
}

CMatrix rician_sample(const CMatrix& los, double k_factor, std::mt19937_64& rng) {
  return rician_mix(los, k_factor, rng);
}

CVector rician_sample(const CVector& los, double k_factor, std::mt19937_64& rng) {
  return rician_mix(los, k_factor, rng);
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c,
                          std::uint64_t d) {
  std::uint64_t h = splitmix64(seed);
  for (std::uint64_t v : {a, b, c, d}) h = splitmix64(h ^ splitmix64(v + 0x632BE59BD9B4E019ULL));
  return h;
}

ChannelSet build_los_channels(const ScenarioConfig& config, const SubcarrierGrid& grid,
                              const std::vector<Vec3>& user_points,
                              const std::vector<Vec3>& eve_points) {
  ChannelSet cs;
  cs.frequencies = grid.frequencies;
  cs.user_points = user_points;
  cs.eve_points = eve_points;
  cs.noise_power =
      noise_power(grid.subcarrier_bandwidth_hz, config.noise_psd_dbm_hz, config.noise_figure_db);
  for (double f : grid.frequencies) {
    cs.ht.push_back(los_channel_ht(f, config));
    auto& hu = cs.hr_user.emplace_back();
    for (const auto& p : user_points) hu.push_back(los_channel_hr(p, Role::User, f, config));
    auto& he = cs.hr_eve.emplace_back();
    for (const auto& p : eve_points) he.push_back(los_channel_hr(p, Role::Eve, f, config));
  }
  return cs;
}

ChannelSet build_rician_channels(const ScenarioConfig& config, const SubcarrierGrid& grid,
                                 const std::vector<Vec3>& user_points,
                                 const std::vector<Vec3>& eve_points, std::uint64_t seed,
                                 std::uint64_t draw) {
  ChannelSet cs = build_los_channels(config, grid, user_points, eve_points);
  const double k_bs_ris = config.rician_k_factors[1];
  const double k_ris_mu = config.rician_k_factors[2];
  for (int k = 0; k < cs.num_subcarriers(); ++k) {
    const auto kk = static_cast<std::uint64_t>(k);
    std::mt19937_64 rng_t(stream_seed(seed, draw, 1, kk));
    cs.ht[k] = rician_sample(cs.ht[k], k_bs_ris, rng_t);
    for (std::size_t u = 0; u < user_points.size(); ++u) {
      std::mt19937_64 rng(stream_seed(seed, draw, 2, kk, u));
      cs.hr_user[k][u] = rician_sample(cs.hr_user[k][u], k_ris_mu, rng);
    }
    for (std::size_t e = 0; e < eve_points.size(); ++e) {
      std::mt19937_64 rng(stream_seed(seed, draw, 3, kk, e));
      cs.hr_eve[k][e] = rician_sample(cs.hr_eve[k][e], k_ris_mu, rng);
    }
  }
  return cs;
}

void write_channel_norms(std::ostream& os, const ChannelSet& channels) {
  os << "k,f_hz,role,x,y,z,norm2\n";
  for (int k = 0; k < channels.num_subcarriers(); ++k) {
    auto emit = [&](Role role, const std::vector<Vec3>& pts, const std::vector<CVector>& h) {
      for (std::size_t i = 0; i < pts.size(); ++i) {
        os << k << ',' << fmt_double(channels.frequencies[k]) << ',' << to_string(role) << ','
           << fmt_double(pts[i][0]) << ',' << fmt_double(pts[i][1]) << ',' << fmt_double(pts[i][2])
           << ',' << fmt_double(h[i].squaredNorm()) << '\n';
      }
    };
    emit(Role::User, channels.user_points, channels.hr_user[k]);
    emit(Role::Eve, channels.eve_points, channels.hr_eve[k]);
  }
}

}  // namespace lcris
