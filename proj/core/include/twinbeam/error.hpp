// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace twinbeam {

/// Raised when a configuration value violates a type invariant. Carries the
/// dotted name of the offending field so the CLI can report it.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Raised by numerical routines that cannot produce a result for valid-looking
/// input (zero denominators, truncation too short, no bracketing minimum).
class ComputationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace twinbeam
