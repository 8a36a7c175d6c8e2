#include "taubnut/report.hpp"

#include <algorithm>
#include <cmath>

namespace taubnut {

CheckResult& VerificationReport::add(std::string name, double residual, double tolerance) {
  const double r = std::abs(residual);
  checks.push_back({std::move(name), r, tolerance, std::isfinite(r) && r < tolerance});
  return checks.back();
}

CheckResult& VerificationReport::add_flag(std::string name, bool ok, double residual, double tolerance) {
  checks.push_back({std::move(name), residual, tolerance, ok});
  return checks.back();
}

void VerificationReport::merge(const VerificationReport& other, const std::string& prefix) {
  for (const CheckResult& c : other.checks) {
    checks.push_back({prefix + c.name, c.max_residual, c.tolerance, c.passed});
  }
}

bool VerificationReport::passed() const noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

double VerificationReport::max_residual() const noexcept {
  double m = 0.0;
  for (const CheckResult& c : checks) m = std::max(m, c.max_residual);
  return m;
}

}  // namespace taubnut
