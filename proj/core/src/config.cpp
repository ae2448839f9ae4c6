// Copyright (c) qvialm contributors
// SPDX-License-Identifier: Apache-2.0

#include "qvi/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

namespace qvi {

const char* to_string(ProblemKind k) {
  switch (k) {
    case ProblemKind::Analytic:
      return "analytic";
    case ProblemKind::Signorini:
      return "signorini";
    case ProblemKind::Gradient:
      return "gradient";
    case ProblemKind::Gnep:
      return "gnep";
    case ProblemKind::Vi:
      return "vi";
  }
  return "?";
}

std::optional<ProblemKind> problem_from_string(const std::string& name) {
  if (name == "analytic") return ProblemKind::Analytic;
  if (name == "signorini") return ProblemKind::Signorini;
  if (name == "gradient") return ProblemKind::Gradient;
  if (name == "gnep") return ProblemKind::Gnep;
  if (name == "vi") return ProblemKind::Vi;
  return std::nullopt;
}

double ExperimentConfig::resolved_tol_outer() const {
  if (tol_outer) return *tol_outer;
  return problem == ProblemKind::Gradient ? 1e-6 : 1e-4;
}

double ExperimentConfig::resolved_tol_inner() const {
  if (tol_inner) return *tol_inner;
  return problem == ProblemKind::Gradient ? 1e-8 : 1e-6;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_real(const std::string& v, int line) {
  try {
    size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError(line, "cannot parse real value '" + v + "'");
  }
}

long parse_int(const std::string& v, int line) {
  try {
    size_t pos = 0;
    const long x = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError(line, "cannot parse integer value '" + v + "'");
  }
}

bool parse_bool(const std::string& v, int line) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(line, "cannot parse boolean value '" + v + "'");
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = raw;
    if (const auto hash = s.find('#'); hash != std::string::npos) s.erase(hash);
    s = trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError(line, "expected 'key = value'");
    const std::string key = trim(s.substr(0, eq));
    const std::string val = trim(s.substr(eq + 1));
    if (key.empty() || val.empty()) throw ConfigError(line, "expected 'key = value'");

    if (key == "problem") {
      const auto kind = problem_from_string(val);
      if (!kind) throw ConfigError(line, "unknown problem '" + val + "'");
      cfg.problem = *kind;
    } else if (key == "n") {
      const long n = parse_int(val, line);
      if (n < 1) throw ConfigError(line, "n must be positive");
      cfg.n = static_cast<int>(n);
    } else if (key == "tol_outer") {
      const double x = parse_real(val, line);
      if (x <= 0.0) throw ConfigError(line, "tol_outer must be positive");
      cfg.tol_outer = x;
    } else if (key == "tol_inner") {
      const double x = parse_real(val, line);
      if (x <= 0.0) throw ConfigError(line, "tol_inner must be positive");
      cfg.tol_inner = x;
    } else if (key == "max_outer") {
      const long x = parse_int(val, line);
      if (x < 1) throw ConfigError(line, "max_outer must be positive");
      cfg.max_outer = static_cast<int>(x);
    } else if (key == "max_inner") {
      const long x = parse_int(val, line);
      if (x < 1) throw ConfigError(line, "max_inner must be positive");
      cfg.max_inner = static_cast<int>(x);
    } else if (key == "rho0") {
      const double x = parse_real(val, line);
      if (x <= 0.0) throw ConfigError(line, "rho0 must be positive");
      cfg.rho0 = x;
    } else if (key == "gamma") {
      const double x = parse_real(val, line);
      if (x <= 1.0) throw ConfigError(line, "gamma must exceed 1");
      cfg.gamma = x;
    } else if (key == "tau") {
      const double x = parse_real(val, line);
      if (x <= 0.0 || x >= 1.0) throw ConfigError(line, "tau must lie in (0,1)");
      cfg.tau = x;
    } else if (key == "safeguard_bound") {
      const double x = parse_real(val, line);
      if (x <= 0.0) throw ConfigError(line, "safeguard_bound must be positive");
      cfg.safeguard_bound = x;
    } else if (key == "p") {
      const double x = parse_real(val, line);
      if (x < 2.0) throw ConfigError(line, "p must be >= 2");
      cfg.p = x;
    } else if (key == "f") {
      cfg.f_const = parse_real(val, line);
    } else if (key == "gnep_alt_slots") {
      cfg.gnep_alt_slots = parse_bool(val, line);
    } else if (key == "out" || key == "output_path") {
      cfg.output_path = val;
    } else if (key == "seed") {
      const long x = parse_int(val, line);
      if (x < 0) throw ConfigError(line, "seed must be nonnegative");
      cfg.seed = static_cast<unsigned long>(x);
    } else {
      throw ConfigError(line, "unknown key '" + key + "'");
    }
  }
  return cfg;
}

void validate_config(const ExperimentConfig& cfg) {
  if (!cfg.problem) throw ConfigError(0, "no problem selected");
  if (cfg.n < 1) throw ConfigError(0, "n must be positive");
  if (*cfg.problem == ProblemKind::Signorini && cfg.n < 3) {
    throw ConfigError(0, "signorini requires n >= 3");
  }
  if (cfg.resolved_tol_inner() > cfg.resolved_tol_outer()) {
    throw ConfigError(0, "tol_inner must not exceed tol_outer");
  }
}

}  // namespace qvi
