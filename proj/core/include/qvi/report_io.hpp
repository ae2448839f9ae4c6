// Copyright (c) qvialm contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "qvi/alm.hpp"

namespace qvi {

/// Exact CSV header of per-iteration records.
extern const char* const kCsvHeader;

/// One CSV line per outer iteration, header as in kCsvHeader.
std::string render_csv(const std::vector<IterationRecord>& records);

/// render_csv with a leading `n` column (sweep output).
std::string render_csv_with_n(
    const std::vector<std::pair<int, std::vector<IterationRecord>>>& runs);

/// Writes text to path atomically (temp file + rename). Throws
/// std::runtime_error on I/O failure.
void write_file_atomic(const std::string& path, const std::string& text);

/// Condensed per-run numbers in the shape of the iteration tables:
/// total outer iterations, summed inner iterations, final penalty.
struct RunSummary {
  int n = 0;
  std::string status;
  int outer_iterations = 0;
  int inner_iterations = 0;
  double rho_max = 0.0;
  double kkt = 0.0;
  double feasibility = 0.0;
};

RunSummary summarize(int n, const AlmReport& report);

/// rho_max snapped to the nearest power of gamma times rho0 (the reported
/// penalties are exact powers when gamma = 10, rho0 = 1).
double rounded_rho_max(double rho_final, double rho0, double gamma);

/// Table with one column per run: rows "outer it.", "inner it.", "rho_max".
std::string render_summary_table(const std::vector<RunSummary>& runs);

}  // namespace qvi
