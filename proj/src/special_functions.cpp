#include "taubnut/special_functions.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <limits>
#include <string>

#include "taubnut/detail/quadrature.hpp"
#include "taubnut/errors.hpp"

namespace taubnut::special {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double v) {
    const double y = v - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

// Σ (a)_j/(b)_j xʲ/j! for x ≥ 0 or a polynomial case.
SpecialFunctionResult kummer_series(double a, double b, double x) {
  KahanSum acc;
  double term = 1.0;
  double magnitude = 1.0;
  acc.add(term);
  const bool polynomial = is_nonpositive_integer(a);
  const int max_terms = 100000;
  for (int j = 0; j < max_terms; ++j) {
    term *= (a + j) / (b + j) * x / (j + 1);
    if (term == 0.0 && polynomial) break;
    acc.add(term);
    magnitude += std::abs(term);
    // Stop once terms are negligible and past the point where they start shrinking.
    if (!polynomial && j > std::abs(a) && std::abs(term) <= 1e-16 * std::abs(acc.sum)) break;
    if (j + 1 == max_terms) throw ConvergenceFailure("kummer_M: series did not terminate");
  }
  return {acc.sum, 4.0 * kEps * magnitude, polynomial ? Method::polynomial : Method::series};
}

SpecialFunctionResult tricomi_integral(double a, double b, double x) {
  const double power = b - a - 1.0;
  auto integrand = [a, power, x](double s) {
    if (s == 0.0) return a == 1.0 ? 1.0 : 0.0;
    const double log_val = -s + (a - 1.0) * std::log(s) + power * std::log1p(s / x);
    return std::exp(log_val);
  };
  const detail::QuadratureResult q = detail::integrate_half_line(integrand, 1e-14);
  const double prefactor = std::exp(-a * std::log(x) - ln_gamma(a));
  const double value = prefactor * q.value;
  const double err = prefactor * q.abs_error + 8.0 * kEps * std::abs(value);
  return {value, err, Method::quadrature};
}

}  // namespace

const char* to_string(Method m) noexcept {
  switch (m) {
    case Method::series: return "series";
    case Method::recurrence: return "recurrence";
    case Method::quadrature: return "quadrature";
    case Method::polynomial: return "polynomial";
  }
  return "unknown";
}

double ln_gamma(double x) {
  if (is_nonpositive_integer(x)) throw PoleError("ln_gamma: pole at x = " + std::to_string(x));
  return boost::math::lgamma(x);
}

double reciprocal_gamma(double x) {
  if (is_nonpositive_integer(x)) return 0.0;
  return 1.0 / boost::math::tgamma(x);
}

double laguerre(int n, double alpha, double x) {
  if (n < 0) throw BadParams("laguerre: degree must be nonnegative");
  double prev = 1.0;
  if (n == 0) return prev;
  double cur = 1.0 + alpha - x;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

SpecialFunctionResult kummer_M(double a, double b, double x) {
  if (is_nonpositive_integer(b)) throw PoleError("kummer_M: b = " + std::to_string(b) + " is a pole");
  if (x == 0.0 || a == 0.0) return {1.0, 0.0, a == 0.0 ? Method::polynomial : Method::series};
  if (x < 0.0 && !is_nonpositive_integer(a)) {
    SpecialFunctionResult r = kummer_series(b - a, b, -x);
    const double scale = std::exp(x);
    r.value *= scale;
    r.est_abs_error = r.est_abs_error * scale + 2.0 * kEps * std::abs(r.value);
    return r;
  }
  return kummer_series(a, b, x);
}

SpecialFunctionResult tricomi_U(double a, double b, double x) {
  if (!(x > 0.0)) throw DomainError("tricomi_U: x must be positive");
  if (a == 0.0) return {1.0, 0.0, Method::polynomial};
  if (is_nonpositive_integer(a)) {
    const int n = static_cast<int>(-a);
    // (−1)ⁿ n! via lgamma keeps large n finite in magnitude reporting.
    const double factorial = std::exp(boost::math::lgamma(n + 1.0));
    const double value = (n % 2 == 0 ? 1.0 : -1.0) * factorial * laguerre(n, b - 1.0, x);
    return {value, 16.0 * kEps * (n + 1) * std::abs(value) + kEps * factorial, Method::polynomial};
  }
  if (a >= 1.0) return tricomi_integral(a, b, x);

  const int m = static_cast<int>(std::ceil(1.0 - a));
  const double a0 = a + m;
  const SpecialFunctionResult u0 = tricomi_integral(a0, b, x);
  const SpecialFunctionResult u1 = tricomi_integral(a0 + 1.0, b, x);
  double upper = u1.value;  // U(c+1)
  double cur = u0.value;    // U(c)
  double rel_seed = u0.est_abs_error / std::abs(u0.value) + u1.est_abs_error / std::abs(u1.value);
  double magnitude = std::max(std::abs(cur), std::abs(upper));
  for (int step = 0; step < m; ++step) {
    const double c = a0 - step;
    const double t1 = -(b - 2.0 * c - x) * cur;
    const double t2 = -c * (c - b + 1.0) * upper;
    const double lower = t1 + t2;
    magnitude = std::max({magnitude, std::abs(t1), std::abs(t2)});
    upper = cur;
    cur = lower;
  }
  const double err = rel_seed * magnitude + 4.0 * kEps * (m + 1) * magnitude;
  return {cur, err, Method::recurrence};
}

SpecialFunctionResult tricomi_U_connection(double a, double b, double x) {
  if (!(x > 0.0)) throw DomainError("tricomi_U_connection: x must be positive");
  if (b == std::floor(b)) throw PoleError("tricomi_U_connection: integer b is a limiting case");
  const SpecialFunctionResult m1 = kummer_M(a, b, x);
  const SpecialFunctionResult m2 = kummer_M(a - b + 1.0, 2.0 - b, x);
  const double c1 = boost::math::tgamma(1.0 - b) * reciprocal_gamma(a - b + 1.0);
  const double c2 = boost::math::tgamma(b - 1.0) * reciprocal_gamma(a) * std::pow(x, 1.0 - b);
  const double t1 = c1 * m1.value;
  const double t2 = c2 * m2.value;
  const double err = std::abs(c1) * m1.est_abs_error + std::abs(c2) * m2.est_abs_error +
                     8.0 * kEps * (std::abs(t1) + std::abs(t2));
  return {t1 + t2, err, Method::series};
}

}  // namespace taubnut::special
