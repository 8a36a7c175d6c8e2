#include "taubnut/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "taubnut/errors.hpp"

namespace taubnut::tridiagonal {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void check_shape(const SymmetricTridiagonal& T) {
  if (T.diag.empty() || T.off.size() + 1 != T.diag.size()) {
    throw BadParams("tridiagonal matrix: off-diagonal must have size n - 1");
  }
}

}  // namespace

int sturm_count(const SymmetricTridiagonal& T, double x) {
  const int n = T.size();
  // Pivots that vanish exactly are nudged by a tiny multiple of the local scale.
  const double tiny = std::numeric_limits<double>::min() / kEps;
  int count = 0;
  double q = T.diag[0] - x;
  if (q == 0.0) q = -tiny;
  if (q < 0.0) ++count;
  for (int i = 1; i < n; ++i) {
    const double e = T.off[static_cast<std::size_t>(i - 1)];
    q = T.diag[static_cast<std::size_t>(i)] - x - e * e / q;
    if (q == 0.0) q = -tiny;
    if (q < 0.0) ++count;
  }
  return count;
}

void gershgorin_bounds(const SymmetricTridiagonal& T, double& lo, double& hi) {
  check_shape(T);
  const int n = T.size();
  lo = std::numeric_limits<double>::infinity();
  hi = -lo;
  for (int i = 0; i < n; ++i) {
    double radius = 0.0;
    if (i > 0) radius += std::abs(T.off[static_cast<std::size_t>(i - 1)]);
    if (i + 1 < n) radius += std::abs(T.off[static_cast<std::size_t>(i)]);
    lo = std::min(lo, T.diag[static_cast<std::size_t>(i)] - radius);
    hi = std::max(hi, T.diag[static_cast<std::size_t>(i)] + radius);
  }
}

std::vector<double> lowest_eigenvalues(const SymmetricTridiagonal& T, int count, double abs_tol,
                                       double upper) {
  check_shape(T);
  if (count < 1 || count > T.size()) throw BadParams("lowest_eigenvalues: count out of range");
  double glo = 0.0;
  double ghi = 0.0;
  gershgorin_bounds(T, glo, ghi);
  const double pad = kEps * std::max(std::abs(glo), std::abs(ghi)) * T.size();
  glo -= pad;
  ghi = std::min(ghi + pad, upper);

  std::vector<double> values(static_cast<std::size_t>(count));
  double lo = glo;
  for (int k = 0; k < count; ++k) {
    // Eigenvalue k is the smallest x with sturm_count(x) > k; eigenvalues are
    // ascending, so the previous result is a valid lower bracket.
    double a = lo;
    double b = ghi;
    while (b - a > abs_tol + 2.0 * kEps * std::max(std::abs(a), std::abs(b))) {
      const double mid = 0.5 * (a + b);
      if (mid <= a || mid >= b) break;
      if (sturm_count(T, mid) > k) {
        b = mid;
      } else {
        a = mid;
      }
    }
    values[static_cast<std::size_t>(k)] = 0.5 * (a + b);
    lo = a;
  }
  return values;
}

std::vector<double> eigenvector(const SymmetricTridiagonal& T, double lambda, int iterations) {
  check_shape(T);
  const int n = T.size();
  const std::size_t N = static_cast<std::size_t>(n);
  double glo = 0.0;
  double ghi = 0.0;
  gershgorin_bounds(T, glo, ghi);
  // A shift just off the eigenvalue keeps the factorization nonsingular.
  const double shift = lambda + 1e3 * kEps * std::max({std::abs(glo), std::abs(ghi), 1.0});

  std::vector<double> v(N, 1.0);
  for (std::size_t i = 0; i < N; ++i) v[i] = 1.0 + 1e-3 * std::sin(0.7 * static_cast<double>(i) + 0.3);
  std::vector<double> c(N), d(N);
  for (int it = 0; it < iterations; ++it) {
    // Thomas solve of (T − shift)w = v.
    double denom = T.diag[0] - shift;
    if (denom == 0.0) denom = kEps;
    c[0] = n > 1 ? T.off[0] / denom : 0.0;
    d[0] = v[0] / denom;
    for (std::size_t i = 1; i < N; ++i) {
      const double e = T.off[i - 1];
      denom = T.diag[i] - shift - e * c[i - 1];
      if (denom == 0.0) denom = kEps;
      c[i] = i + 1 < N ? T.off[i] / denom : 0.0;
      d[i] = (v[i] - e * d[i - 1]) / denom;
    }
    v[N - 1] = d[N - 1];
    for (std::size_t i = N - 1; i-- > 0;) v[i] = d[i] - c[i] * v[i + 1];
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (!(norm > 0.0) || !std::isfinite(norm)) throw ConvergenceFailure("eigenvector: inverse iteration failed");
    for (double& x : v) x /= norm;
  }
  // Fix the sign so that the first significant component is positive.
  for (double x : v) {
    if (std::abs(x) > 1e-8) {
      if (x < 0.0) {
        for (double& y : v) y = -y;
      }
      break;
    }
  }
  return v;
}

}  // namespace taubnut::tridiagonal
