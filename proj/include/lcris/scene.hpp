// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "lcris/types.hpp"

namespace lcris {

enum class ArrayKind { ULA, UPA };

// Element layout of the BS or RIS array. A ULA lies along one axis
// ("x", "y" or "z"); a UPA spans a plane ("xy", "xz" or "yz") with
// counts given per plane axis in that order.
struct ArraySpec {
  ArrayKind kind = ArrayKind::ULA;
  std::vector<int> counts{1};
  double spacing_m = 0.0;  // 0 means "half wavelength at the carrier", filled at load
  std::string orientation = "y";

  int size() const;
  // Offsets of every element from the array center, meters.
  std::vector<Vec3> element_offsets() const;
};

struct RegionSpec {
  Vec3 min_corner = Vec3::Zero();
  Vec3 max_corner = Vec3::Zero();

  Vec3 center() const { return 0.5 * (min_corner + max_corner); }
  bool contains(const Vec3& p, double tol = 1e-12) const;
  bool overlaps(const RegionSpec& other) const;
};

using GridCounts = std::array<int, 3>;

struct SolverParams {
  double eta0 = 0.01;
  double eta_growth = 5.0;
  int max_inner = 9;   // I_max
  int max_outer = 2;   // J_max
  double feasibility_tol = 1e-6;
  double objective_tol = 1e-7;
  int sdp_max_iters = 0;  // 0: 50 * N
  // Inner SDP maximizes a worst-case secrecy margin next to the rank-one
  // penalty. false keeps the penalty as the only objective term.
  bool margin_objective = true;
};

struct ScenarioConfig {
  Vec3 bs_position{10.0, 10.0, 5.0};
  Vec3 ris_position = Vec3::Zero();
  ArraySpec bs_array{ArrayKind::UPA, {16, 16}, 0.0, "xz"};
  ArraySpec ris_array{ArrayKind::ULA, {100}, 0.0, "y"};
  double carrier_hz = 60e9;
  double bandwidth_hz = 8.64e9;
  int num_subcarriers = 9;
  double subcarrier_bandwidth_hz = 4.2e6;  // W_k, enters the noise power only
  double beta = 2.4;
  double tx_power_dbm = 43.0;
  double noise_psd_dbm_hz = -174.0;
  double noise_figure_db = 6.0;
  // (BS-MU, BS-RIS, RIS-MU)
  std::array<double, 3> pathloss_exponents{2.0, 2.0, 2.0};
  std::array<double, 3> rician_k_factors{0.0, 10.0, 10.0};
  RegionSpec user_region{{5.0, 0.0, -5.0}, {7.0, 2.0, -5.0}};
  RegionSpec eve_region{{5.0, -2.0, -5.0}, {6.0, -1.0, -5.0}};
  GridCounts user_resolution{3, 3, 1};
  GridCounts eve_resolution{2, 2, 1};
  SolverParams solver{};
  std::uint64_t rng_seed = 1;

  double wavelength() const { return kSpeedOfLight / carrier_hz; }
  double tx_power_watt() const { return dbm_to_watt(tx_power_dbm); }
};

struct SubcarrierGrid {
  std::vector<double> frequencies;
  std::vector<double> beta_k;
  double center_hz = 0.0;
  double subcarrier_bandwidth_hz = 0.0;

  int size() const { return static_cast<int>(frequencies.size()); }
};

// Throws ParseError for unreadable/malformed input and ConfigError for
// invariant violations. Missing keys take the defaults above.
ScenarioConfig load_scenario(const std::filesystem::path& path);
ScenarioConfig parse_scenario(const nlohmann::json& doc);
ScenarioConfig parse_scenario_text(const std::string& text);
void validate_scenario(ScenarioConfig& config);  // also fills spacing defaults
nlohmann::json to_json(const ScenarioConfig& config);

std::vector<Vec3> discretize_region(const RegionSpec& region, const GridCounts& resolution);

SubcarrierGrid build_subcarriers(const ScenarioConfig& config);
// Single-subcarrier grid at the carrier (used by the center-frequency benchmark).
SubcarrierGrid center_only_grid(const ScenarioConfig& config);

}  // namespace lcris
