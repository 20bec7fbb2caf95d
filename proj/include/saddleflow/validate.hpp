#pragma once

#include <functional>
#include <string>
#include <vector>

#include "saddleflow/penalty.hpp"

namespace saddleflow {

/// Replaceable pieces used by the suites, so a deliberately broken
/// implementation can be run through them.
struct ValidationHooks {
  std::function<DualVector(const DualDomain&, const Vector&)> project = project_dual;
};

struct SuiteResult {
  std::string name;
  std::string module;
  int checks = 0;
  /// One entry per failed check: "<invariant>: <witness values>".
  std::vector<std::string> failures;

  bool passed() const { return failures.empty(); }
};

struct ValidationReport {
  std::vector<SuiteResult> suites;

  bool passed() const;
  /// One line per suite, then one indented line per failure.
  std::string format() const;
};

/// Runs every built-in invariant suite on fixed seeds.
ValidationReport run_validation(const ValidationHooks& hooks = {});

// Individual suites, exposed for tests.
SuiteResult validate_conjugacy(const ValidationHooks& hooks);
SuiteResult validate_projection(const ValidationHooks& hooks);
SuiteResult validate_oracle();
SuiteResult validate_static_dual_regret();
SuiteResult validate_matrix_tracking();
SuiteResult validate_regret_bound();
SuiteResult validate_weak_duality();
SuiteResult validate_max_psi_concentration();

}  // namespace saddleflow
