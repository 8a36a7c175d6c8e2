#pragma once

#include <string>
#include <vector>

namespace taubnut {

/// One named check with its worst observed residual.
struct CheckResult {
  std::string name;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

/// Structured pass/fail record. The overall verdict is the conjunction of all checks.
struct VerificationReport {
  std::vector<CheckResult> checks;
  double runtime_s = 0.0;

  /// Records `residual` against `tolerance`; NaN residuals always fail.
  CheckResult& add(std::string name, double residual, double tolerance);
  /// Records a check whose verdict is decided by the caller.
  CheckResult& add_flag(std::string name, bool ok, double residual = 0.0, double tolerance = 0.0);
  /// Appends every check of `other`, prefixing names with `prefix`.
  void merge(const VerificationReport& other, const std::string& prefix = "");

  bool passed() const noexcept;
  double max_residual() const noexcept;
};

}  // namespace taubnut
