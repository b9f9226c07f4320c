// SPDX-License-Identifier: Apache-2.0
#include "lcris/csv_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "lcris/errors.hpp"

namespace lcris {

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string provenance_comment(const std::string& config_hash, std::uint64_t seed) {
  return "# config_hash=" + config_hash + " seed=" + std::to_string(seed);
}

std::string fmt_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

void write_profile_csv(std::ostream& os, const PhaseProfile& profile, const std::string& comment) {
  if (!comment.empty()) os << comment << '\n';
  os << "n,omega_c_rad\n";
  for (int n = 0; n < profile.size(); ++n) os << n << ',' << fmt_double(profile.omega_c()[n]) << '\n';
}

PhaseProfile read_profile_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open profile " + path.string());
  std::vector<double> values;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      if (line.rfind("n,", 0) == 0) continue;
    }
    const auto cols = split_csv_line(line);
    if (cols.size() != 2) throw ParseError("profile: expected 2 columns, got: " + line);
    try {
      const auto idx = std::stoul(cols[0]);
      if (idx != values.size()) throw ParseError("profile: indices must be 0..N-1 in order");
      values.push_back(std::stod(cols[1]));
    } catch (const std::logic_error&) {
      throw ParseError("profile: malformed row: " + line);
    }
  }
  if (values.empty()) throw ParseError("profile: no entries in " + path.string());
  RVector omega(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) omega[static_cast<Eigen::Index>(i)] = values[i];
  try {
    return PhaseProfile(omega);
  } catch (const std::domain_error& e) {
    throw ParseError(std::string("profile: ") + e.what());
  }
}

void write_pgm(std::ostream& os, int width, int height, const std::vector<unsigned char>& pixels) {
  if (pixels.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw std::invalid_argument("write_pgm: pixel count does not match dimensions");
  }
  os << "P5\n" << width << ' ' << height << "\n255\n";
  os.write(reinterpret_cast<const char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
}

}  // namespace lcris
