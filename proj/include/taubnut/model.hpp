#pragma once

#include <cmath>
#include <limits>
#include <string>

namespace taubnut {

/// One member (N, η, k, ħ) of the deformed Coulomb family.
///
/// η and k may take either sign; each operation states which sectors it
/// accepts. Units are whatever the caller fixes through ħ and k.
struct ModelParams {
  int N = 3;
  double eta = 0.0;
  double k = 1.0;
  double hbar = 1.0;

  /// Throws BadParams unless N ≥ 2, ħ > 0 and all values are finite.
  void validate() const;
  std::string describe() const;
};

/// Open radial interval (lower, ∞) on which the metric is defined.
struct RadialInterval {
  double lower = 0.0;
  static constexpr double upper = std::numeric_limits<double>::infinity();

  bool contains(double r) const noexcept { return r > lower && r < upper; }
};

/// (0, ∞) for η ≥ 0 and (|η|, ∞) for η < 0.
RadialInterval radial_domain(const ModelParams& params);

/// Throws DomainError when r is not strictly inside radial_domain(params).
void require_in_domain(const ModelParams& params, double r, const char* where);

}  // namespace taubnut
