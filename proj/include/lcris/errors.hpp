// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace lcris {

/// Malformed scenario / curve / problem file.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A configuration value violates a documented invariant.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// The phase design could not proceed (SDP infeasible at the weakest secrecy target).
class SolverAbort : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lcris
