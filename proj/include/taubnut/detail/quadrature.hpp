#pragma once

// Thin wrappers over Boost.Math quadrature with the library's error idiom.

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <string>

#include "taubnut/errors.hpp"

namespace taubnut::detail {

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
};

/// Adaptive 15-point Gauss–Kronrod on a finite interval [a, b]; `rel_tol` is
/// relative to the integral value.
template <class F>
QuadratureResult integrate_gk(F&& f, double a, double b, double rel_tol = 1e-13,
                              unsigned max_depth = 25) {
  double error = 0.0;
  double l1 = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      f, a, b, max_depth, rel_tol, &error, &l1);
  if (!std::isfinite(value)) {
    throw IntegrationFailure("Gauss-Kronrod produced a non-finite value");
  }
  if (error > 1e-6 * std::max(l1, 1e-300)) {
    throw IntegrationFailure("Gauss-Kronrod did not converge: error " + std::to_string(error));
  }
  return {value, error};
}

/// Adaptive Gauss–Kronrod on [a, b] split into `pieces` equal panels; useful when
/// the integrand carries several oscillations or a decaying tail.
template <class F>
QuadratureResult integrate_gk_panels(F&& f, double a, double b, int pieces, double rel_tol = 1e-13) {
  QuadratureResult total;
  const double width = (b - a) / pieces;
  for (int i = 0; i < pieces; ++i) {
    const double lo = a + i * width;
    const double hi = (i + 1 == pieces) ? b : lo + width;
    const QuadratureResult part = integrate_gk(f, lo, hi, rel_tol);
    total.value += part.value;
    total.abs_error += part.abs_error;
  }
  return total;
}

/// Exponential-sinh quadrature on [0, ∞); handles algebraic endpoint singularities.
template <class F>
QuadratureResult integrate_half_line(F&& f, double rel_tol = 1e-14) {
  // Boost 1.74 declares integrate() non-const; one instance per thread keeps the lazily
  // refined abscissa tables unshared.
  thread_local boost::math::quadrature::exp_sinh<double> integrator;
  double error = 0.0;
  double l1 = 0.0;
  std::size_t levels = 0;
  const double value = integrator.integrate(f, rel_tol, &error, &l1, &levels);
  if (!std::isfinite(value)) {
    throw IntegrationFailure("exp-sinh quadrature produced a non-finite value");
  }
  return {value, error};
}

/// Tanh-sinh quadrature on a finite interval; tolerates endpoint singularities.
template <class F>
QuadratureResult integrate_tanh_sinh(F&& f, double a, double b, double rel_tol = 1e-14) {
  thread_local boost::math::quadrature::tanh_sinh<double> integrator;
  double error = 0.0;
  double l1 = 0.0;
  std::size_t levels = 0;
  const double value = integrator.integrate(f, a, b, rel_tol, &error, &l1, &levels);
  if (!std::isfinite(value)) {
    throw IntegrationFailure("tanh-sinh quadrature produced a non-finite value");
  }
  return {value, error};
}

}  // namespace taubnut::detail
