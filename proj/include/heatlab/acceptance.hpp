#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "heatlab/report.hpp"

namespace heatlab {

struct CriterionResult {
  int id = 0;
  std::string group;  // spectral | evolve | kernel | modes
  std::string title;
  std::vector<CheckRecord> checks;
  double seconds = 0.0;
  double budget_seconds = 0.0;
  std::string error;  // set when the criterion threw
  bool pass = false;

  std::string label() const { return "C" + std::to_string(id); }
  /// One line: status, id, title, failing checks and timing.
  std::string line() const;
};

struct AcceptanceOptions {
  std::vector<std::string> only;  // groups or ids (C5); empty runs everything
  double eigen_tol = 1e-4;
};

struct AcceptanceSummary {
  std::vector<CriterionResult> results;

  bool all_pass() const;
  nlohmann::ordered_json to_json() const;
};

/// Criterion ids and groups, in run order.
std::vector<std::pair<int, std::string>> acceptance_catalogue();

/// Runs the selected criteria, printing each line to `log` as it completes.
AcceptanceSummary acceptance_suite(const AcceptanceOptions& options, std::ostream* log = nullptr);

}  // namespace heatlab
