// Copyright (c) qvialm contributors
// SPDX-License-Identifier: Apache-2.0

#include "qvi/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace qvi {

const char* const kCsvHeader =
    "k,rho,V,feasibility,kkt_residual,r_k,inner_iters,lambda_norm,wall_ms";

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string csv_row(const IterationRecord& r) {
  std::ostringstream os;
  os << r.k << ',' << fmt(r.rho) << ',' << fmt(r.v_value) << ',' << fmt(r.feasibility)
     << ',' << fmt(r.kkt_residual) << ',' << fmt(r.complementarity_bound) << ','
     << r.inner_iterations << ',' << fmt(r.lambda_norm) << ',' << fmt(r.wall_ms);
  return os.str();
}

}  // namespace

std::string render_csv(const std::vector<IterationRecord>& records) {
  std::ostringstream os;
  os << kCsvHeader << '\n';
  for (const auto& r : records) os << csv_row(r) << '\n';
  return os.str();
}

std::string render_csv_with_n(
    const std::vector<std::pair<int, std::vector<IterationRecord>>>& runs) {
  std::ostringstream os;
  os << "n," << kCsvHeader << '\n';
  for (const auto& [n, records] : runs) {
    for (const auto& r : records) os << n << ',' << csv_row(r) << '\n';
  }
  return os.str();
}

void write_file_atomic(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
    out << text;
    if (!out) throw std::runtime_error("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw std::runtime_error("cannot move output into place: " + ec.message());
}

RunSummary summarize(int n, const AlmReport& report) {
  RunSummary s;
  s.n = n;
  s.status = to_string(report.status);
  s.outer_iterations = static_cast<int>(report.records.size());
  for (const auto& r : report.records) s.inner_iterations += r.inner_iterations;
  if (!report.records.empty()) {
    s.rho_max = report.records.back().rho;
    s.kkt = report.records.back().kkt_residual;
    s.feasibility = report.records.back().feasibility;
  }
  return s;
}

double rounded_rho_max(double rho_final, double rho0, double gamma) {
  if (rho_final <= 0.0 || rho0 <= 0.0 || gamma <= 1.0) return rho_final;
  const double j = std::round(std::log(rho_final / rho0) / std::log(gamma));
  return rho0 * std::pow(gamma, j);
}

std::string render_summary_table(const std::vector<RunSummary>& runs) {
  auto cell = [](const std::string& s) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%10s", s.c_str());
    return std::string(buf);
  };
  std::ostringstream os;
  os << cell("n");
  for (const auto& r : runs) os << cell(std::to_string(r.n));
  os << '\n' << cell("outer it.");
  for (const auto& r : runs) os << cell(std::to_string(r.outer_iterations));
  os << '\n' << cell("inner it.");
  for (const auto& r : runs) os << cell(std::to_string(r.inner_iterations));
  os << '\n' << cell("rho_max");
  for (const auto& r : runs) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.0e", r.rho_max);
    os << cell(buf);
  }
  os << '\n';
  return os.str();
}

}  // namespace qvi
