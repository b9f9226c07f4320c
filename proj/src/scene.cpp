// SPDX-License-Identifier: Apache-2.0
#include "lcris/scene.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "lcris/errors.hpp"
#include "lcris/lc_model.hpp"

namespace lcris {

using json = nlohmann::json;

namespace {

int axis_index(char c) {
  switch (c) {
    case 'x': return 0;
    case 'y': return 1;
    case 'z': return 2;
    default: return -1;
  }
}

Vec3 read_vec3(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 3) throw ConfigError(field, "expected a 3-element array");
  Vec3 v;
  for (int i = 0; i < 3; ++i) {
    if (!j[i].is_number()) throw ConfigError(field, "expected numbers");
    v[i] = j[i].get<double>();
  }
  return v;
}

std::array<double, 3> read_triple(const json& j, const std::string& field) {
  Vec3 v = read_vec3(j, field);
  return {v[0], v[1], v[2]};
}

GridCounts read_counts(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 3) throw ConfigError(field, "expected 3 per-axis counts");
  GridCounts c{};
  for (int i = 0; i < 3; ++i) {
    if (!j[i].is_number_integer()) throw ConfigError(field, "expected integers");
    c[i] = j[i].get<int>();
  }
  return c;
}

template <typename T>
void read_opt(const json& obj, const char* key, T& out, const std::string& prefix = "") {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(prefix + key, e.what());
  }
}

ArraySpec read_array(const json& j, const std::string& field, const ArraySpec& defaults) {
  if (!j.is_object()) throw ConfigError(field, "expected an object");
  ArraySpec spec = defaults;
  if (auto it = j.find("kind"); it != j.end()) {
    const auto kind = it->get<std::string>();
    if (kind == "ULA" || kind == "ula") {
      spec.kind = ArrayKind::ULA;
    } else if (kind == "UPA" || kind == "upa") {
      spec.kind = ArrayKind::UPA;
    } else {
      throw ConfigError(field + ".kind", "must be ULA or UPA");
    }
  }
  if (auto it = j.find("counts"); it != j.end()) {
    if (!it->is_array()) throw ConfigError(field + ".counts", "expected an array");
    spec.counts.clear();
    for (const auto& c : *it) {
      if (!c.is_number_integer()) throw ConfigError(field + ".counts", "expected integers");
      spec.counts.push_back(c.get<int>());
    }
  }
  read_opt(j, "spacing", spec.spacing_m, field + ".");
  read_opt(j, "orientation", spec.orientation, field + ".");
  return spec;
}

RegionSpec read_region(const json& j, const std::string& field) {
  if (!j.is_object()) throw ConfigError(field, "expected an object with min/max");
  if (!j.contains("min") || !j.contains("max")) throw ConfigError(field, "missing min/max");
  return RegionSpec{read_vec3(j["min"], field + ".min"), read_vec3(j["max"], field + ".max")};
}

void validate_array(ArraySpec& spec, const std::string& field, double wavelength) {
  const std::size_t axes = spec.kind == ArrayKind::ULA ? 1 : 2;
  if (spec.counts.size() != axes) {
    throw ConfigError(field + ".counts", "expected " + std::to_string(axes) + " entries");
  }
  for (int c : spec.counts) {
    if (c < 1) throw ConfigError(field + ".counts", "counts must be >= 1");
  }
  if (spec.orientation.size() != axes) {
    throw ConfigError(field + ".orientation", "expected " + std::to_string(axes) + " axis letter(s)");
  }
  for (char c : spec.orientation) {
    if (axis_index(c) < 0) throw ConfigError(field + ".orientation", "axis letters are x, y, z");
  }
  if (axes == 2 && spec.orientation[0] == spec.orientation[1]) {
    throw ConfigError(field + ".orientation", "plane axes must differ");
  }
  if (spec.spacing_m == 0.0) spec.spacing_m = 0.5 * wavelength;
  if (!(spec.spacing_m > 0.0)) throw ConfigError(field + ".spacing", "must be > 0");
}

}  // namespace

int ArraySpec::size() const {
  int n = 1;
  for (int c : counts) n *= c;
  return n;
}

std::vector<Vec3> ArraySpec::element_offsets() const {
  std::vector<Vec3> out;
  out.reserve(static_cast<std::size_t>(size()));
  if (kind == ArrayKind::ULA) {
    const int ax = axis_index(orientation.at(0));
    const int n = counts.at(0);
    for (int i = 0; i < n; ++i) {
      Vec3 p = Vec3::Zero();
      p[ax] = (i - 0.5 * (n - 1)) * spacing_m;
      out.push_back(p);
    }
  } else {
    const int a0 = axis_index(orientation.at(0));
    const int a1 = axis_index(orientation.at(1));
    const int n0 = counts.at(0);
    const int n1 = counts.at(1);
    for (int i = 0; i < n0; ++i) {
      for (int j = 0; j < n1; ++j) {
        Vec3 p = Vec3::Zero();
        p[a0] = (i - 0.5 * (n0 - 1)) * spacing_m;
        p[a1] = (j - 0.5 * (n1 - 1)) * spacing_m;
        out.push_back(p);
      }
    }
  }
  return out;
}

bool RegionSpec::contains(const Vec3& p, double tol) const {
  for (int i = 0; i < 3; ++i) {
    if (p[i] < min_corner[i] - tol || p[i] > max_corner[i] + tol) return false;
  }
  return true;
}

bool RegionSpec::overlaps(const RegionSpec& other) const {
  // Closed boxes: a shared face already puts one location in both sets.
  for (int i = 0; i < 3; ++i) {
    if (max_corner[i] < other.min_corner[i] || other.max_corner[i] < min_corner[i]) return false;
  }
  return true;
}

ScenarioConfig parse_scenario(const json& doc) {
  if (!doc.is_object()) throw ParseError("scenario root must be a JSON object");
  ScenarioConfig c;
  if (doc.contains("bs_position")) c.bs_position = read_vec3(doc["bs_position"], "bs_position");
  if (doc.contains("ris_position")) c.ris_position = read_vec3(doc["ris_position"], "ris_position");
  if (doc.contains("bs_array")) c.bs_array = read_array(doc["bs_array"], "bs_array", c.bs_array);
  if (doc.contains("ris_array")) c.ris_array = read_array(doc["ris_array"], "ris_array", c.ris_array);
  read_opt(doc, "carrier_hz", c.carrier_hz);
  read_opt(doc, "bandwidth_hz", c.bandwidth_hz);
  read_opt(doc, "num_subcarriers", c.num_subcarriers);
  read_opt(doc, "subcarrier_bandwidth_hz", c.subcarrier_bandwidth_hz);
  read_opt(doc, "beta", c.beta);
  read_opt(doc, "tx_power_dbm", c.tx_power_dbm);
  read_opt(doc, "noise_psd_dbm_hz", c.noise_psd_dbm_hz);
  read_opt(doc, "noise_figure_db", c.noise_figure_db);
  if (doc.contains("pathloss_exponents")) {
    c.pathloss_exponents = read_triple(doc["pathloss_exponents"], "pathloss_exponents");
  }
  if (doc.contains("rician_k_factors")) {
    c.rician_k_factors = read_triple(doc["rician_k_factors"], "rician_k_factors");
  }
  if (doc.contains("user_region")) c.user_region = read_region(doc["user_region"], "user_region");
  if (doc.contains("eve_region")) c.eve_region = read_region(doc["eve_region"], "eve_region");
  if (auto it = doc.find("grid_resolution"); it != doc.end()) {
    if (!it->is_object()) throw ConfigError("grid_resolution", "expected {user, eve}");
    if (it->contains("user")) c.user_resolution = read_counts((*it)["user"], "grid_resolution.user");
    if (it->contains("eve")) c.eve_resolution = read_counts((*it)["eve"], "grid_resolution.eve");
  }
  if (auto it = doc.find("solver"); it != doc.end()) {
    if (!it->is_object()) throw ConfigError("solver", "expected an object");
    auto& s = c.solver;
    read_opt(*it, "eta0", s.eta0, "solver.");
    read_opt(*it, "eta_growth", s.eta_growth, "solver.");
    read_opt(*it, "max_inner", s.max_inner, "solver.");
    read_opt(*it, "max_outer", s.max_outer, "solver.");
    read_opt(*it, "feasibility_tol", s.feasibility_tol, "solver.");
    read_opt(*it, "objective_tol", s.objective_tol, "solver.");
    read_opt(*it, "sdp_max_iters", s.sdp_max_iters, "solver.");
    read_opt(*it, "margin_objective", s.margin_objective, "solver.");
  }
  read_opt(doc, "rng_seed", c.rng_seed);
  validate_scenario(c);
  return c;
}

ScenarioConfig parse_scenario_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("scenario parse error: ") + e.what());
  }
  return parse_scenario(doc);
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario_text(ss.str());
}

void validate_scenario(ScenarioConfig& c) {
  if (!(c.carrier_hz > 0.0)) throw ConfigError("carrier_hz", "must be > 0");
  if (!(c.bandwidth_hz > 0.0)) throw ConfigError("bandwidth_hz", "must be > 0");
  if (!(c.carrier_hz > 0.5 * c.bandwidth_hz)) {
    throw ConfigError("carrier_hz", "must exceed bandwidth_hz / 2");
  }
  if (c.num_subcarriers < 1) throw ConfigError("num_subcarriers", "must be >= 1");
  if (!(c.subcarrier_bandwidth_hz > 0.0)) throw ConfigError("subcarrier_bandwidth_hz", "must be > 0");
  if (!std::isfinite(c.beta)) throw ConfigError("beta", "must be finite");
  // Lowest band-edge scale factor; every subcarrier scale must stay positive.
  const double edge = 1.0 - std::abs(c.beta) * 0.5 * c.bandwidth_hz / c.carrier_hz;
  if (!(edge > 0.0)) throw ConfigError("beta", "beta_k <= 0 at the band edge");

  const double lambda = c.wavelength();
  validate_array(c.bs_array, "bs_array", lambda);
  validate_array(c.ris_array, "ris_array", lambda);

  for (int i = 0; i < 3; ++i) {
    if (c.pathloss_exponents[i] < 0.0) throw ConfigError("pathloss_exponents", "must be >= 0");
    if (c.rician_k_factors[i] < 0.0) throw ConfigError("rician_k_factors", "must be >= 0");
  }
  for (const auto& [name, r] : {std::pair{"user_region", c.user_region}, std::pair{"eve_region", c.eve_region}}) {
    for (int i = 0; i < 3; ++i) {
      if (!(r.min_corner[i] <= r.max_corner[i])) throw ConfigError(name, "min must be <= max");
    }
  }
  if (c.user_region.overlaps(c.eve_region)) {
    throw ConfigError("eve_region", "user and eavesdropper regions overlap");
  }
  for (const auto& [name, g] : {std::pair{"grid_resolution.user", c.user_resolution},
                                std::pair{"grid_resolution.eve", c.eve_resolution}}) {
    for (int v : g) {
      if (v < 1) throw ConfigError(name, "counts must be >= 1");
    }
  }
  if ((c.bs_position - c.ris_position).norm() <= 0.0) {
    throw ConfigError("bs_position", "coincides with ris_position");
  }
  const auto& s = c.solver;
  if (!(s.eta0 > 0.0)) throw ConfigError("solver.eta0", "must be > 0");
  if (!(s.eta_growth >= 1.0)) throw ConfigError("solver.eta_growth", "must be >= 1");
  if (s.max_inner < 1) throw ConfigError("solver.max_inner", "must be >= 1");
  if (s.max_outer < 1) throw ConfigError("solver.max_outer", "must be >= 1");
  if (!(s.feasibility_tol > 0.0)) throw ConfigError("solver.feasibility_tol", "must be > 0");
  if (!(s.objective_tol > 0.0)) throw ConfigError("solver.objective_tol", "must be > 0");
  if (s.sdp_max_iters < 0) throw ConfigError("solver.sdp_max_iters", "must be >= 0");
}

json to_json(const ScenarioConfig& c) {
  auto vec = [](const Vec3& v) { return json::array({v[0], v[1], v[2]}); };
  auto arr = [](const ArraySpec& a) {
    return json{{"kind", a.kind == ArrayKind::ULA ? "ULA" : "UPA"},
                {"counts", a.counts},
                {"spacing", a.spacing_m},
                {"orientation", a.orientation}};
  };
  auto region = [&](const RegionSpec& r) {
    return json{{"min", vec(r.min_corner)}, {"max", vec(r.max_corner)}};
  };
  return json{
      {"bs_position", vec(c.bs_position)},
      {"ris_position", vec(c.ris_position)},
      {"bs_array", arr(c.bs_array)},
      {"ris_array", arr(c.ris_array)},
      {"carrier_hz", c.carrier_hz},
      {"bandwidth_hz", c.bandwidth_hz},
      {"num_subcarriers", c.num_subcarriers},
      {"subcarrier_bandwidth_hz", c.subcarrier_bandwidth_hz},
      {"beta", c.beta},
      {"tx_power_dbm", c.tx_power_dbm},
      {"noise_psd_dbm_hz", c.noise_psd_dbm_hz},
      {"noise_figure_db", c.noise_figure_db},
      {"pathloss_exponents", c.pathloss_exponents},
      {"rician_k_factors", c.rician_k_factors},
      {"user_region", region(c.user_region)},
      {"eve_region", region(c.eve_region)},
      {"grid_resolution", {{"user", c.user_resolution}, {"eve", c.eve_resolution}}},
      {"solver",
       {{"eta0", c.solver.eta0},
        {"eta_growth", c.solver.eta_growth},
        {"max_inner", c.solver.max_inner},
        {"max_outer", c.solver.max_outer},
        {"feasibility_tol", c.solver.feasibility_tol},
        {"objective_tol", c.solver.objective_tol},
        {"sdp_max_iters", c.solver.sdp_max_iters},
        {"margin_objective", c.solver.margin_objective}}},
      {"rng_seed", c.rng_seed},
  };
}

std::vector<Vec3> discretize_region(const RegionSpec& region, const GridCounts& resolution) {
  std::array<std::vector<double>, 3> axes;
  for (int a = 0; a < 3; ++a) {
    const int n = resolution[a];
    if (n < 1) throw std::invalid_argument("discretize_region: resolution must be >= 1");
    const double lo = region.min_corner[a];
    const double hi = region.max_corner[a];
    if (lo == hi) {
      axes[a] = {lo};
    } else if (n == 1) {
      axes[a] = {0.5 * (lo + hi)};
    } else {
      axes[a].resize(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) {
        // Endpoints are assigned exactly so the corners lie on the box.
        axes[a][i] = (i == n - 1) ? hi : lo + (hi - lo) * i / (n - 1);
      }
    }
  }
  std::vector<Vec3> pts;
  pts.reserve(axes[0].size() * axes[1].size() * axes[2].size());
  for (double x : axes[0]) {
    for (double y : axes[1]) {
      for (double z : axes[2]) pts.emplace_back(x, y, z);
    }
  }
  return pts;
}

SubcarrierGrid build_subcarriers(const ScenarioConfig& c) {
  SubcarrierGrid g;
  g.center_hz = c.carrier_hz;
  g.subcarrier_bandwidth_hz = c.subcarrier_bandwidth_hz;
  const int K = c.num_subcarriers;
  const double spacing = c.bandwidth_hz / K;
  for (int k = 0; k < K; ++k) {
    // Centered bins; the offset is formed relative to the middle so that the
    // center bin of an odd grid lands on f_c exactly.
    const double f = c.carrier_hz + (k - 0.5 * (K - 1)) * spacing;
    const double b = scale_factor(f, c.carrier_hz, c.beta);
    if (!(b > 0.0)) throw ConfigError("beta", "beta_k <= 0 at subcarrier " + std::to_string(k));
    g.frequencies.push_back(f);
    g.beta_k.push_back(b);
  }
  return g;
}

SubcarrierGrid center_only_grid(const ScenarioConfig& c) {
  SubcarrierGrid g;
  g.center_hz = c.carrier_hz;
  g.subcarrier_bandwidth_hz = c.subcarrier_bandwidth_hz;
  g.frequencies = {c.carrier_hz};
  g.beta_k = {1.0};
  return g;
}

}  // namespace lcris
