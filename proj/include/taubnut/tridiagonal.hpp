#pragma once

#include <limits>
#include <vector>

namespace taubnut::tridiagonal {

/// Real symmetric tridiagonal matrix; `off[i]` couples rows i and i+1.
struct SymmetricTridiagonal {
  std::vector<double> diag;
  std::vector<double> off;

  int size() const noexcept { return static_cast<int>(diag.size()); }
};

/// Number of eigenvalues strictly below x (Sturm sequence via LDLᵀ pivots).
int sturm_count(const SymmetricTridiagonal& T, double x);

/// Gershgorin interval containing the whole spectrum.
void gershgorin_bounds(const SymmetricTridiagonal& T, double& lo, double& hi);

/// The `count` smallest eigenvalues, ascending, by bisection on the Sturm count.
/// Each is resolved to |Δλ| ≤ abs_tol + 2ε|λ|. When `upper` is finite the search
/// is restricted to (−∞, upper) and the caller must ensure
/// sturm_count(T, upper) ≥ count.
std::vector<double> lowest_eigenvalues(const SymmetricTridiagonal& T, int count, double abs_tol = 0.0,
                                       double upper = std::numeric_limits<double>::infinity());

/// Unit eigenvector for an accurate eigenvalue `lambda` by inverse iteration.
std::vector<double> eigenvector(const SymmetricTridiagonal& T, double lambda, int iterations = 3);

}  // namespace taubnut::tridiagonal
