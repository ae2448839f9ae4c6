// Copyright (c) qvialm contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "qvi/config.hpp"
#include "qvi/problems.hpp"
#include "qvi/report_io.hpp"

namespace qvi {

/// Builds the configured QviProblem instance.
QviProblem build_problem(const ExperimentConfig& cfg);

/// AlmConfig matching the configuration (tolerances resolved, safeguard box
/// sized for the problem).
AlmConfig alm_config_for(const ExperimentConfig& cfg, const QviProblem& p);

struct ExperimentResult {
  int exit_code = 0;  // 0 Converged, 2 MaxOuter, 3 SubproblemFailure, 4 I/O
  AlmReport report;
  RunSummary summary;
  std::string csv_path;
  double wall_s = 0.0;
};

/// Runs one experiment: builds the problem, solves from (x0, lambda0) =
/// (0, 0), writes the per-iteration CSV, returns report and summary without
/// printing. Optional observer mirrors alm_solve's.
ExperimentResult run_experiment_collect(const ExperimentConfig& cfg,
                                        const AlmObserver& observer = {});

/// run_experiment_collect plus the printed summary table; returns the exit
/// code (0 Converged, 2 MaxOuter, 3 SubproblemFailure, 4 I/O failure).
int run_experiment(const ExperimentConfig& cfg);

/// Runs one experiment per n in n_list, prints the combined summary table
/// and writes a combined CSV; returns the first nonzero exit code after all
/// runs complete.
int sweep(const ExperimentConfig& cfg, const std::vector<int>& n_list);

}  // namespace qvi
