#pragma once

// Gamma, Laguerre and confluent hypergeometric functions for real arguments.

namespace taubnut::special {

enum class Method { series, recurrence, quadrature, polynomial };

const char* to_string(Method m) noexcept;

struct SpecialFunctionResult {
  double value = 0.0;
  double est_abs_error = 0.0;
  Method method = Method::series;
};

/// ln|Γ(x)|. Throws PoleError when x is a nonpositive integer.
double ln_gamma(double x);

/// 1/Γ(x), which is zero at the poles of Γ.
double reciprocal_gamma(double x);

/// Generalized Laguerre polynomial L_n^α(x) by the ascending three-term recurrence.
double laguerre(int n, double alpha, double x);

/// Kummer M(a, b, x) = ₁F₁(a; b; x).
///
/// Taylor series with Kahan summation, terminated when a term drops below
/// 1e−16 of the running sum. For x < 0 the Kummer transformation
/// M(a,b,x) = eˣ M(b−a, b, −x) keeps the series free of cancellation. When a is a
/// nonpositive integer the finite polynomial is summed directly.
/// Throws PoleError when b is a nonpositive integer.
SpecialFunctionResult kummer_M(double a, double b, double x);

/// Tricomi U(a, b, x) for x > 0.
///
///   a a nonpositive integer:  U(−n, b, x) = (−1)ⁿ n! L_n^{b−1}(x)
///   a ≥ 1:                    x^{−a}/Γ(a) ∫₀^∞ e^{−s} s^{a−1} (1 + s/x)^{b−a−1} ds
///   otherwise:                the integral at a + m and a + m + 1 with a + m ∈ [1, 2),
///                             followed by m steps of the downward a-recurrence
///                             U(c−1) = −(b − 2c − x) U(c) − c(c − b + 1) U(c+1).
///
/// U is the recessive solution of the a-recurrence as a → +∞, so the downward
/// direction is stable. No special case is needed for integer b.
SpecialFunctionResult tricomi_U(double a, double b, double x);

/// U from the connection formula
///   Γ(1−b)/Γ(a−b+1) M(a,b,x) + Γ(b−1)/Γ(a) x^{1−b} M(a−b+1, 2−b, x).
/// Independent of tricomi_U; limited to non-integer b (PoleError otherwise) and
/// to moderate x where the two terms do not cancel catastrophically.
SpecialFunctionResult tricomi_U_connection(double a, double b, double x);

}  // namespace taubnut::special
