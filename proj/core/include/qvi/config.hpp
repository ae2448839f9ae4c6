// Copyright (c) qvialm contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace qvi {

enum class ProblemKind { Analytic, Signorini, Gradient, Gnep, Vi };

const char* to_string(ProblemKind k);
std::optional<ProblemKind> problem_from_string(const std::string& name);

/// Thrown on malformed configuration text; carries the 1-based line number
/// (0 when not tied to a specific line).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& what)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what
                                    : what),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

struct ExperimentConfig {
  std::optional<ProblemKind> problem;
  int n = 16;
  std::optional<double> tol_outer;  // unset: resolved per problem
  std::optional<double> tol_inner;
  int max_outer = 50;
  int max_inner = 100;
  double rho0 = 1.0;
  double gamma = 10.0;
  double tau = 0.1;
  double safeguard_bound = 1e6;
  double p = 2.0;                   // gradient problem exponent
  std::optional<double> f_const;    // problem-specific load override
  bool gnep_alt_slots = false;
  std::string output_path;
  unsigned long seed = 0;

  /// Tolerances with the per-problem defaults filled in (1e-4/1e-6, and
  /// 1e-6/1e-8 for the gradient problem).
  double resolved_tol_outer() const;
  double resolved_tol_inner() const;
};

/// Parses line-oriented `key = value` text with `#` comments. Unknown keys
/// and invalid values raise ConfigError with the offending line number.
ExperimentConfig parse_config(const std::string& text);

/// Validates cross-field invariants (tau in (0,1), gamma > 1, ...).
void validate_config(const ExperimentConfig& cfg);

}  // namespace qvi
