// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "lcris/lc_model.hpp"

namespace lcris {

// 64-bit FNV-1a, hex-encoded.
std::string fnv1a_hex(const std::string& text);

// "# config_hash=<hash> seed=<seed>"
std::string provenance_comment(const std::string& config_hash, std::uint64_t seed);

// Shortest round-trip representation.
std::string fmt_double(double x);

void write_profile_csv(std::ostream& os, const PhaseProfile& profile, const std::string& comment);
PhaseProfile read_profile_csv(const std::filesystem::path& path);

// Splits a CSV line on commas (no quoting support needed for numeric files).
std::vector<std::string> split_csv_line(const std::string& line);

// 8-bit binary graymap; values row-major, already clamped to [0, 255].
void write_pgm(std::ostream& os, int width, int height, const std::vector<unsigned char>& pixels);

}  // namespace lcris
