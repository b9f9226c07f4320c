// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lcris/optimizer.hpp"

namespace lcris::cli {

enum ExitCode : int { kOk = 0, kValidation = 2, kSolverAbort = 3, kIoError = 4 };

struct EvalMode {
  bool rician = false;
  int draws = 0;
};

EvalMode parse_eval_mode(const std::string& text);  // "los" | "rician:<n>"

struct HeatmapSpec {
  std::array<double, 2> x_range{0.0, 10.0};
  std::array<double, 2> y_range{-5.0, 5.0};
  std::array<int, 2> resolution{101, 101};  // (nx, ny)
  double z = -5.0;
  int k = 0;  // subcarrier index into the scenario grid
  std::array<double, 2> window_db{-20.0, 40.0};
};

struct RunManifest {
  std::filesystem::path scenario;
  std::vector<Method> methods{Method::Proposed, Method::Bench1, Method::Bench2, Method::Bench3};
  std::filesystem::path output_dir{"out"};
  std::optional<std::uint64_t> seed;
  EvalMode eval{};
  bool log_timing = false;
  HeatmapSpec heatmap{};
};

struct SquintArgs {
  std::vector<int> n_list{8, 20, 60, 100};
  std::vector<int> n_sweep{8, 16, 20, 32, 60, 64, 100, 128, 256};
  double f_c = 60e9;
  double bandwidth = 8e9;
  int samples = 401;
  double distance_m = 20.0;
  double angle_deg = 30.0;
  bool frequency_dependent_pathloss = false;
  std::filesystem::path output_dir{"out"};
};

int cmd_design(const RunManifest& manifest);
int cmd_heatmap(const RunManifest& manifest, const std::filesystem::path& profile_path);
int cmd_squint(const SquintArgs& args);
int cmd_validate(const std::filesystem::path& scenario);

// Full command-line entry point (verbs: design, heatmap, squint, validate).
int run(int argc, char** argv);

}  // namespace lcris::cli
