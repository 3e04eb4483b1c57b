#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "records.hpp"
#include "torusdet/options.hpp"

namespace torusdet::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidationFailed = 1,
  kExitUsage = 2,
  kExitDomain = 3,
  kExitBudget = 4,
};

/// Defaults shared by every subcommand.
struct Defaults {
  static constexpr double det_tol = 1e-8;
  /// internal_tol = det_tol * internal_ratio
  static constexpr double internal_ratio = 1e-2;
  static constexpr double internal_tol = 1e-10;
  static constexpr std::size_t max_evaluations = 1'000'000;
  static constexpr std::size_t max_terms = 1'000'000;
};

/// route: paper | corrected | oracle | all. Throws DomainError for an
/// invalid operator; route failures are recorded in the record.
RunRecord det_record(double tau1, double tau2, double v0, const std::string& route,
                     double tol, const EvalOptions& opts);

struct ScanAxis {
  double start = 0.0;
  double stop = 0.0;
  int steps = 1;
  std::vector<double> values() const;
};

struct ScanGrid {
  ScanAxis tau1;
  ScanAxis tau2;
  ScanAxis v0;
  std::string route = "all";
  std::string format = "csv";

  /// Throws std::invalid_argument when steps < 1 or a tau2 / v0 value ≤ 0.
  void validate() const;
};

/// One record per grid point in lexicographic (tau1, tau2, v0) order.
std::vector<RunRecord> run_scan(const ScanGrid& grid, double tol,
                                const EvalOptions& opts, unsigned threads = 0);

/// Full command-line entry point. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace torusdet::cli
