// SPDX-License-Identifier: Apache-2.0
#include "lcris/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"

#include "lcris/csv_io.hpp"
#include "lcris/errors.hpp"
#include "lcris/secrecy.hpp"
#include "lcris/squint.hpp"

namespace lcris::cli {

namespace fs = std::filesystem;

namespace {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::ofstream open_out(const fs::path& path, bool binary = false) {
  std::ofstream os(path, binary ? std::ios::binary : std::ios::out);
  if (!os) throw IoError("cannot write " + path.string());
  return os;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + dir.string());
}

ScenarioConfig load_manifest_scenario(const RunManifest& m) {
  if (!fs::exists(m.scenario)) throw IoError("scenario file not found: " + m.scenario.string());
  ScenarioConfig config = load_scenario(m.scenario);
  if (m.seed) config.rng_seed = *m.seed;
  return config;
}

std::string comment_for(const ScenarioConfig& config) {
  return provenance_comment(fnv1a_hex(to_json(config).dump()), config.rng_seed);
}

// Runs body and maps exceptions to exit codes.
template <typename F>
int guarded(F&& body) {
  try {
    return body();
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const SolverAbort& e) {
    std::cerr << "solver abort: " << e.what() << '\n';
    return kSolverAbort;
  } catch (const ConfigError& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return kValidation;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kValidation;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kValidation;
  } catch (const std::domain_error& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kValidation;
  }
}

void write_runlog(std::ostream& os, const DesignResult& r, const std::string& comment,
                  bool timing) {
  os << comment << '\n' << "j,i,eta,gamma,rank_residual,inner_objective,wall_ms\n";
  for (const auto& e : r.log) {
    os << e.outer << ',' << e.inner << ',' << fmt_double(e.eta) << ',' << fmt_double(e.gamma) << ','
       << fmt_double(e.rank_residual) << ',' << fmt_double(e.inner_objective) << ','
       << (timing ? fmt_double(std::round(e.wall_ms * 1000.0) / 1000.0) : std::string("-"))
       << '\n';
  }
}

void write_sr_curve(std::ostream& os, const SecrecyReport& rep, const SubcarrierGrid& grid,
                    const std::string& comment) {
  os << comment << '\n' << "k,f_hz,worst_sr_bits\n";
  for (int k = 0; k < grid.size(); ++k) {
    os << k << ',' << fmt_double(grid.frequencies[k]) << ',' << fmt_double(rep.worst_per_k[k])
       << '\n';
  }
}

void write_curve(const fs::path& path, const SquintCurve& c, const std::string& x_name,
                 const std::string& comment) {
  auto os = open_out(path);
  os << comment << '\n' << x_name << ",ratio_db\n";
  for (std::size_t i = 0; i < c.x.size(); ++i) {
    os << fmt_double(c.x[i]) << ',' << fmt_double(c.ratio_db[i]) << '\n';
  }
}

nlohmann::json region_json(const RegionSpec& r) {
  return {{"min", {r.min_corner[0], r.min_corner[1], r.min_corner[2]}},
          {"max", {r.max_corner[0], r.max_corner[1], r.max_corner[2]}}};
}

std::vector<double> linspace(const std::array<double, 2>& range, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) {
    v.push_back(n == 1 ? 0.5 * (range[0] + range[1])
                       : range[0] + (range[1] - range[0]) * i / (n - 1));
  }
  if (n > 1) v.back() = range[1];
  return v;
}

}  // namespace

EvalMode parse_eval_mode(const std::string& text) {
  if (text == "los") return {};
  const std::string prefix = "rician:";
  if (text.rfind(prefix, 0) == 0) {
    const std::string rest = text.substr(prefix.size());
    std::size_t pos = 0;
    int n = 0;
    try {
      n = std::stoi(rest, &pos);
    } catch (const std::logic_error&) {
      pos = 0;
    }
    if (pos == rest.size() && !rest.empty() && n >= 1) return {true, n};
  }
  throw std::invalid_argument("evaluation mode must be 'los' or 'rician:<draws>', got '" + text + "'");
}

int cmd_design(const RunManifest& manifest) {
  return guarded([&] {
    if (manifest.methods.empty()) throw std::invalid_argument("no methods selected");
    const ScenarioConfig config = load_manifest_scenario(manifest);
    ensure_dir(manifest.output_dir);
    const std::string comment = comment_for(config);
    const Experiment exp = make_experiment(config);
    const CVector q = beamformer_lemma1(config);

    std::ostringstream summary;
    summary << comment << '\n' << "method,alpha_bits,gamma_final,eval\n";
    for (Method m : manifest.methods) {
      std::cerr << "designing " << to_string(m) << " ...\n";
      DesignResult r = run_method(m, exp, q);
      std::string eval = "los";
      if (manifest.eval.rician) {
        r.report = rician_report(r.profile, q, config, exp.grid, exp.user_points, exp.eve_points,
                                 manifest.eval.draws, config.rng_seed);
        r.alpha = r.report.alpha;
        eval = "rician:" + std::to_string(manifest.eval.draws);
      }
      const std::string stem = to_string(m);
      {
        auto os = open_out(manifest.output_dir / (stem + "_profile.csv"));
        write_profile_csv(os, r.profile, comment);
      }
      {
        auto os = open_out(manifest.output_dir / (stem + "_runlog.csv"));
        write_runlog(os, r, comment, manifest.log_timing);
      }
      {
        auto os = open_out(manifest.output_dir / (stem + "_report.csv"));
        write_report_csv(os, r.report, exp.channels, comment);
      }
      {
        auto os = open_out(manifest.output_dir / (stem + "_sr_curve.csv"));
        write_sr_curve(os, r.report, exp.grid, comment);
      }
      summary << stem << ',' << fmt_double(r.alpha) << ',' << fmt_double(r.gamma_final) << ','
              << eval << '\n';
      std::cerr << "  alpha = " << r.alpha << " bits/symbol\n";
    }
    auto os = open_out(manifest.output_dir / "summary.csv");
    os << summary.str();
    if (!os) throw IoError("failed writing summary.csv");
    return static_cast<int>(kOk);
  });
}

int cmd_heatmap(const RunManifest& manifest, const fs::path& profile_path) {
  return guarded([&] {
    const ScenarioConfig config = load_manifest_scenario(manifest);
    if (!fs::exists(profile_path)) throw IoError("profile file not found: " + profile_path.string());
    const PhaseProfile profile = read_profile_csv(profile_path);
    const HeatmapSpec& hm = manifest.heatmap;
    if (profile.size() != config.ris_array.size()) {
      throw std::invalid_argument("profile has " + std::to_string(profile.size()) +
                                  " entries, RIS has " + std::to_string(config.ris_array.size()));
    }
    const SubcarrierGrid grid = build_subcarriers(config);
    if (hm.k < 0 || hm.k >= grid.size()) {
      throw std::invalid_argument("subcarrier index out of range: " + std::to_string(hm.k));
    }
    if (hm.resolution[0] < 1 || hm.resolution[1] < 1) {
      throw std::invalid_argument("heatmap resolution must be >= 1");
    }
    if (!(hm.window_db[1] > hm.window_db[0])) throw std::invalid_argument("empty dB window");
    ensure_dir(manifest.output_dir);

    const double f = grid.frequencies[hm.k];
    const double noise =
        noise_power(grid.subcarrier_bandwidth_hz, config.noise_psd_dbm_hz, config.noise_figure_db);
    const CVector q = beamformer_lemma1(config);
    const CVector t = reflect_coeffs(profile, grid.beta_k[hm.k]).cwiseProduct(los_channel_ht(f, config) * q);
    const auto xs = linspace(hm.x_range, hm.resolution[0]);
    const auto ys = linspace(hm.y_range, hm.resolution[1]);

    std::vector<std::vector<double>> db(ys.size(), std::vector<double>(xs.size()));
    for (std::size_t iy = 0; iy < ys.size(); ++iy) {
      for (std::size_t ix = 0; ix < xs.size(); ++ix) {
        const CVector h = los_channel_hr(Vec3(xs[ix], ys[iy], hm.z), Role::User, f, config);
        db[iy][ix] = linear_to_db(std::norm(h.dot(t)) / noise);
      }
    }

    const std::string stem = profile_path.stem().string() + "_heatmap_k" + std::to_string(hm.k);
    const std::string comment = comment_for(config);
    {
      auto os = open_out(manifest.output_dir / (stem + ".csv"));
      os << comment << '\n' << "y_m\\x_m";
      for (double x : xs) os << ',' << fmt_double(x);
      os << '\n';
      for (std::size_t iy = 0; iy < ys.size(); ++iy) {
        os << fmt_double(ys[iy]);
        for (double v : db[iy]) os << ',' << fmt_double(v);
        os << '\n';
      }
    }
    {
      std::vector<unsigned char> px;
      const double lo = hm.window_db[0];
      const double span = hm.window_db[1] - lo;
      for (std::size_t r = 0; r < ys.size(); ++r) {
        const auto& row = db[ys.size() - 1 - r];  // top row is the largest y
        for (double v : row) {
          const double u = std::clamp((v - lo) / span, 0.0, 1.0);
          px.push_back(static_cast<unsigned char>(std::lround(255.0 * u)));
        }
      }
      auto os = open_out(manifest.output_dir / (stem + ".pgm"), true);
      write_pgm(os, static_cast<int>(xs.size()), static_cast<int>(ys.size()), px);
    }
    {
      nlohmann::json side = {
          {"config_hash", fnv1a_hex(to_json(config).dump())},
          {"seed", config.rng_seed},
          {"subcarrier", hm.k},
          {"f_hz", f},
          {"z_m", hm.z},
          {"x_range_m", {hm.x_range[0], hm.x_range[1]}},
          {"y_range_m", {hm.y_range[0], hm.y_range[1]}},
          {"resolution", {hm.resolution[0], hm.resolution[1]}},
          {"window_db", {hm.window_db[0], hm.window_db[1]}},
          {"user_region", region_json(config.user_region)},
          {"eve_region", region_json(config.eve_region)},
          {"pgm_rows", "top row is y_max"}};
      auto os = open_out(manifest.output_dir / (stem + ".json"));
      os << side.dump(2) << '\n';
    }
    return static_cast<int>(kOk);
  });
}

int cmd_squint(const SquintArgs& args) {
  return guarded([&] {
    if (args.n_list.empty() || args.n_sweep.empty()) throw std::invalid_argument("empty N list");
    SquintGeometry g;
    g.distance_m = args.distance_m;
    g.angle_deg = args.angle_deg;
    g.frequency_dependent_pathloss = args.frequency_dependent_pathloss;
    std::vector<SquintCurve> curves;
    for (int n : args.n_list) curves.push_back(snr_ratio_curve(n, args.f_c, args.bandwidth, args.samples, g));
    const SquintCurve sweep = min_ratio_vs_elements(args.n_sweep, args.f_c, args.bandwidth, args.samples, g);

    ensure_dir(args.output_dir);
    nlohmann::json params = {{"f_c", args.f_c},           {"bandwidth", args.bandwidth},
                             {"samples", args.samples},   {"distance_m", args.distance_m},
                             {"angle_deg", args.angle_deg}, {"pathloss", args.frequency_dependent_pathloss},
                             {"n_list", args.n_list},     {"n_sweep", args.n_sweep}};
    const std::string comment = provenance_comment(fnv1a_hex(params.dump()), 0);
    for (std::size_t i = 0; i < curves.size(); ++i) {
      write_curve(args.output_dir / ("squint_ratio_N" + std::to_string(args.n_list[i]) + ".csv"),
                  curves[i], "f_hz", comment);
    }
    write_curve(args.output_dir / "squint_min_ratio.csv", sweep, "num_elements", comment);
    return static_cast<int>(kOk);
  });
}

int cmd_validate(const fs::path& scenario) {
  return guarded([&] {
    RunManifest m;
    m.scenario = scenario;
    const ScenarioConfig config = load_manifest_scenario(m);
    const SubcarrierGrid grid = build_subcarriers(config);
    const auto pu = discretize_region(config.user_region, config.user_resolution);
    const auto pe = discretize_region(config.eve_region, config.eve_resolution);
    std::cout << "scenario ok: " << scenario.string() << '\n'
              << "  RIS elements: " << config.ris_array.size() << '\n'
              << "  BS antennas: " << config.bs_array.size() << '\n'
              << "  subcarriers: " << grid.size() << " (beta_k " << grid.beta_k.front() << " .. "
              << grid.beta_k.back() << ")\n"
              << "  user points: " << pu.size() << ", eve points: " << pe.size() << '\n'
              << "  constraints per SDP: " << pu.size() * pe.size() * grid.beta_k.size() << '\n'
              << "  config hash: " << fnv1a_hex(to_json(config).dump()) << '\n';
    return static_cast<int>(kOk);
  });
}

int run(int argc, char** argv) {
  CLI::App app{"LC-RIS wideband secrecy simulator and phase-profile optimizer"};
  app.require_subcommand(1);

  RunManifest manifest;
  std::vector<std::string> methods;
  std::string eval = "los";
  std::uint64_t seed = 0;
  fs::path profile_path;

  auto* design = app.add_subcommand("design", "Optimize phase profiles and write reports");
  design->add_option("-s,--scenario", manifest.scenario, "Scenario JSON")->required();
  design->add_option("-m,--methods", methods, "Comma-separated subset of proposed,bench1,bench2,bench3")
      ->delimiter(',');
  design->add_option("-o,--out", manifest.output_dir, "Output directory");
  auto* seed_opt = design->add_option("--seed", seed, "Override the scenario RNG seed");
  design->add_option("--eval", eval, "Evaluation mode: los | rician:<draws>");
  design->add_flag("--log-timing", manifest.log_timing, "Record wall-clock time in run logs");

  auto* heatmap = app.add_subcommand("heatmap", "Evaluate a stored profile over an x-y plane");
  heatmap->add_option("-s,--scenario", manifest.scenario, "Scenario JSON")->required();
  heatmap->add_option("-p,--profile", profile_path, "Profile CSV")->required();
  heatmap->add_option("-o,--out", manifest.output_dir, "Output directory");
  heatmap->add_option("-k,--subcarrier", manifest.heatmap.k, "Subcarrier index");
  heatmap->add_option("--x-range", manifest.heatmap.x_range, "x min max (m)");
  heatmap->add_option("--y-range", manifest.heatmap.y_range, "y min max (m)");
  heatmap->add_option("--resolution", manifest.heatmap.resolution, "nx ny");
  heatmap->add_option("--z", manifest.heatmap.z, "z plane (m)");
  heatmap->add_option("--window", manifest.heatmap.window_db, "PGM dB window: lo hi");

  SquintArgs squint;
  auto* sq = app.add_subcommand("squint", "Beam-squint curves for a far-field ULA");
  sq->add_option("--n-list", squint.n_list, "Element counts for the ratio-vs-frequency curves")->delimiter(',');
  sq->add_option("--n-sweep", squint.n_sweep, "Element counts for the min-ratio sweep")->delimiter(',');
  sq->add_option("--fc", squint.f_c, "Center frequency (Hz)");
  sq->add_option("--bandwidth", squint.bandwidth, "Bandwidth (Hz)");
  sq->add_option("--samples", squint.samples, "Frequency samples");
  sq->add_option("--distance", squint.distance_m, "Receiver distance (m)");
  sq->add_option("--angle", squint.angle_deg, "Receiver angle from broadside (deg)");
  sq->add_flag("--freq-pathloss", squint.frequency_dependent_pathloss, "Include 1/f^2 pathloss");
  sq->add_option("-o,--out", squint.output_dir, "Output directory");

  fs::path validate_path;
  auto* validate = app.add_subcommand("validate", "Check a scenario file");
  validate->add_option("scenario", validate_path, "Scenario JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? static_cast<int>(kOk) : static_cast<int>(kValidation);
  }

  if (*design) {
    if (*seed_opt) manifest.seed = seed;
    try {
      manifest.eval = parse_eval_mode(eval);
      if (!methods.empty()) {
        manifest.methods.clear();
        for (const auto& m : methods) manifest.methods.push_back(method_from_string(m));
      }
    } catch (const std::invalid_argument& e) {
      std::cerr << "invalid argument: " << e.what() << '\n';
      return kValidation;
    }
    return cmd_design(manifest);
  }
  if (*heatmap) return cmd_heatmap(manifest, profile_path);
  if (*sq) return cmd_squint(squint);
  return cmd_validate(validate_path);
}

}  // namespace lcris::cli
