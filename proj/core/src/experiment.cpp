// Copyright (c) qvialm contributors
// SPDX-License-Identifier: Apache-2.0

#include "qvi/experiment.hpp"

#include <chrono>
#include <cstdio>
#include <iostream>

namespace qvi {

QviProblem build_problem(const ExperimentConfig& cfg) {
  validate_config(cfg);
  switch (*cfg.problem) {
    case ProblemKind::Analytic:
      return build_analytic_moving_set();
    case ProblemKind::Signorini: {
      SignoriniData d;
      d.n = cfg.n;
      if (cfg.f_const) d.f_value = *cfg.f_const;
      return build_signorini(d);
    }
    case ProblemKind::Gradient: {
      GradientQviData d;
      d.n = cfg.n;
      d.p = cfg.p;
      if (cfg.f_const) d.f_value = *cfg.f_const;
      return build_gradient_qvi(d);
    }
    case ProblemKind::Gnep: {
      GnepData d;
      d.n = cfg.n;
      if (cfg.f_const) d.f_value = *cfg.f_const;
      d.alternative_slots = cfg.gnep_alt_slots;
      return build_gnep(d);
    }
    case ProblemKind::Vi: {
      // Fixed-set demo VI: F(x) = x over C = [1, 2]^{n^2}; solution is the
      // lower corner.
      const Eigen::Index dim = static_cast<Eigen::Index>(cfg.n) * cfg.n;
      return qvi_from_vi(
          [](const Eigen::VectorXd& x) { return x; },
          [](const Eigen::VectorXd&, const Eigen::VectorXd& d) { return d; },
          BoxSet::bounded(dim, 1.0, 2.0), Eigen::VectorXd::Ones(dim));
    }
  }
  throw ConfigError(0, "unreachable problem kind");
}

AlmConfig alm_config_for(const ExperimentConfig& cfg, const QviProblem& p) {
  AlmConfig a;
  a.rho0 = cfg.rho0;
  a.gamma = cfg.gamma;
  a.tau = cfg.tau;
  a.safeguard_box = BoxSet::bounded(p.m, -cfg.safeguard_bound, cfg.safeguard_bound);
  a.tol_outer = cfg.resolved_tol_outer();
  a.tol_inner = cfg.resolved_tol_inner();
  a.max_outer = cfg.max_outer;
  a.max_inner = cfg.max_inner;
  return a;
}

namespace {

std::string default_csv_path(const ExperimentConfig& cfg) {
  return std::string(to_string(*cfg.problem)) + "_n" + std::to_string(cfg.n) + ".csv";
}

int status_exit_code(AlmStatus s) {
  switch (s) {
    case AlmStatus::Converged:
      return 0;
    case AlmStatus::MaxOuter:
      return 2;
    case AlmStatus::SubproblemFailure:
      return 3;
  }
  return 3;
}

}  // namespace

ExperimentResult run_experiment_collect(const ExperimentConfig& cfg,
                                        const AlmObserver& observer) {
  using clock = std::chrono::steady_clock;
  ExperimentResult res;
  const QviProblem p = build_problem(cfg);
  const AlmConfig acfg = alm_config_for(cfg, p);

  const auto t0 = clock::now();
  res.report = alm_solve(p, acfg, Eigen::VectorXd::Zero(p.n),
                         Eigen::VectorXd::Zero(p.m), observer);
  res.wall_s = std::chrono::duration<double>(clock::now() - t0).count();
  res.summary = summarize(cfg.n, res.report);
  res.summary.rho_max = rounded_rho_max(res.summary.rho_max, cfg.rho0, cfg.gamma);
  res.exit_code = status_exit_code(res.report.status);

  res.csv_path = cfg.output_path.empty() ? default_csv_path(cfg) : cfg.output_path;
  try {
    write_file_atomic(res.csv_path, render_csv(res.report.records));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    res.exit_code = 4;
  }
  return res;
}

int run_experiment(const ExperimentConfig& cfg) {
  const ExperimentResult res = run_experiment_collect(cfg);
  std::cout << "problem " << to_string(*cfg.problem) << ", status "
            << res.summary.status << ", wall " << res.wall_s << " s\n"
            << render_summary_table({res.summary}) << "kkt "
            << res.summary.kkt << ", feasibility " << res.summary.feasibility
            << "\ncsv " << res.csv_path << '\n';
  return res.exit_code;
}

int sweep(const ExperimentConfig& cfg, const std::vector<int>& n_list) {
  if (n_list.empty()) {
    std::cerr << "error: empty n list\n";
    return 4;
  }
  validate_config(cfg);
  const std::string combined_path = cfg.output_path.empty()
                                        ? std::string(to_string(*cfg.problem)) + "_sweep.csv"
                                        : cfg.output_path;
  std::vector<RunSummary> summaries;
  std::vector<std::pair<int, std::vector<IterationRecord>>> all_records;
  int exit_code = 0;
  for (int n : n_list) {
    ExperimentConfig run_cfg = cfg;
    run_cfg.n = n;
    // Per-run CSVs land next to the combined file.
    run_cfg.output_path = combined_path + "." + std::to_string(n) + ".csv";
    const ExperimentResult res = run_experiment_collect(run_cfg);
    summaries.push_back(res.summary);
    all_records.emplace_back(n, res.report.records);
    if (exit_code == 0 && res.exit_code != 0) exit_code = res.exit_code;
  }
  try {
    write_file_atomic(combined_path, render_csv_with_n(all_records));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    if (exit_code == 0) exit_code = 4;
  }
  std::cout << "problem " << to_string(*cfg.problem) << '\n'
            << render_summary_table(summaries) << "csv " << combined_path << '\n';
  return exit_code;
}

}  // namespace qvi
