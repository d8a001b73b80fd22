#pragma once

#include <cstdint>
#include <string>
#include <vector>

// Validation suites: finite-N formulas against independent oracles, finite N
// against the large-N forms, and Monte Carlo against theory. Each check is
// tagged with the acceptance criterion it belongs to (0 for supporting checks).

namespace egin::validation {

struct Check {
  int criterion = 0;
  std::string name;
  bool passed = false;
  double measured = 0.0;   // deviation (relative, absolute or in standard errors)
  double tolerance = 0.0;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::vector<Check> checks;
  double seconds = 0.0;

  bool passed() const;
  /// Checks of one criterion; all must pass for the criterion to pass.
  std::vector<Check> for_criterion(int c) const;
};

struct McOptions {
  std::uint64_t seed = 1;
  int threads = 0;
  int streams = 64;
};

/// Suite names accepted by run_suite, in the order of the acceptance criteria.
const std::vector<std::string>& suite_names();
/// Suites needed for acceptance criterion c (1..10).
std::vector<std::string> suites_for_criterion(int c);

SuiteReport run_suite(const std::string& name, const McOptions& opt = {});

}  // namespace egin::validation
