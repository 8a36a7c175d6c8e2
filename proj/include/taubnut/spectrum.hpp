#pragma once

// Closed-form quantum sector of the deformed Coulomb system.

#include <cstdint>

#include "taubnut/errors.hpp"
#include "taubnut/model.hpp"

namespace taubnut::spectrum {

struct QuantumLevel {
  int n = 0;       ///< radial quantum number
  int l = 0;       ///< angular momentum quantum number
  int frak_n = 0;  ///< principal label n + l
  double E = 0.0;
  double K = 0.0;  ///< effective coupling k + ηE
};

/// Which quantization the radial wave function belongs to.
enum class Gauge {
  direct,    ///< kinetic term −ħ²Δ/(2f²); measure r^{N−1}(1+η/r) dr
  conformal  ///< conformal Laplacian; measure r^{N−1}(1+η/r)^{N/2} dr
};

/// Root of the quadratic for E. `flipped` is the other root and exists only as a
/// diagnostic for branch-rule tests.
enum class Branch { physical, flipped };

/// s = 𝔫 + (N−1)/2.
double principal_s(const ModelParams& params, int frak_n);

/// −k²/(2ħ²s²). Throws NonAttractive for k ≤ 0.
double coulomb_energy(const ModelParams& params, int n, int l);

/// E = −k² / (ħ²s² + kη + √(ħ⁴s⁴ + 2ħ²kηs²)), the root that tends to the Coulomb
/// value as η → 0. Throws SectorError unless k > 0 and η ≥ 0, and also for the
/// flipped branch at η = 0 where that root does not exist.
QuantumLevel energy(const ModelParams& params, int n, int l, Branch branch = Branch::physical);

/// η²E² + 2(kη + ħ²s²)E + k².
double quadratic_residual(const ModelParams& params, const QuantumLevel& level);

/// −(ηE+k)²/(2E) − ħ²s².
double casimir_relation_residual(const ModelParams& params, const QuantumLevel& level);

struct EnergySeries {
  double E0 = 0.0;
  double c1 = 0.0;  ///< k³/(2ħ⁴s⁴)
  double c2 = 0.0;  ///< −5k⁴/(8ħ⁶s⁶)
};

/// Taylor coefficients of E(η) at η = 0. Throws NonAttractive for k ≤ 0.
EnergySeries energy_series(const ModelParams& params, int n, int l);

/// α = (k+ηE)/(ħ√(−2E)) − l − (N−1)/2; equals n on the spectrum.
double kummer_alpha(const ModelParams& params, int l, double E);
/// β = 2l + N − 1.
double kummer_beta(const ModelParams& params, int l);
/// ρ = 2r√(−2E)/ħ.
double kummer_rho(const ModelParams& params, double E, double r);

/// Unnormalized radial eigenfunction
///   Φ(r) = r^l exp(−Kr/(ħ²s)) L_n^{2l+N−2}(2Kr/(ħ²s))
/// in the direct gauge, times (1+η/r)^{(2−N)/4} in the conformal gauge.
double eigenfunction_radial(const ModelParams& params, const QuantumLevel& level, Gauge gauge,
                            double r);

/// Radial weight r^{N−1}(1+η/r) (direct) or r^{N−1}(1+η/r)^{N/2} (conformal).
double radial_measure(const ModelParams& params, Gauge gauge, double r);

/// c > 0 with ∫ c²Φ² w dr = 1, where w is the measure of `measure_gauge`.
/// The integral runs in u = Kr/(ħ²s) over [0, 50 + 10(n+l+N)].
double normalization_constant(const ModelParams& params, const QuantumLevel& level, Gauge gauge);

/// ∫ Φ_a Φ_b w dr for two levels with the same l, evaluated in `function_gauge`
/// with the measure of `measure_gauge`. Both functions are normalized in their own
/// gauge first, so only a mismatched measure breaks orthonormality.
double overlap(const ModelParams& params, const QuantumLevel& a, const QuantumLevel& b,
               Gauge function_gauge, Gauge measure_gauge);

/// dim 𝒴_l = C(l+N−1, N−1) − C(l+N−3, N−1).
std::uint64_t harmonic_dimension(int N, int l);

/// Σ_{l=0}^{𝔫} dim 𝒴_l.
std::uint64_t degeneracy(int N, int frak_n);

/// Û_eff,l(r) = r/(2(η+r)) · (−ħ²(η²+4r²)/(16r²(η+r)²) + ħ²(l(l+N−2) + (N−2)²/4)/r² − 2k/r).
double quantum_effective_potential(const ModelParams& params, int l, double r);

struct PotentialMinimum {
  double r_min = 0.0;
  double value = 0.0;
};

/// Local minimum of Û_eff,l by a log-spaced scan followed by Brent refinement.
/// Throws NoMinimum(no_local_minimum) for N = 2, l = 0 and whenever no interior
/// minimum exists, and NoMinimum(unbounded_at_origin) when the potential falls
/// to −∞ at the lower end without an interior minimum.
PotentialMinimum quantum_effective_minimum(const ModelParams& params, int l);

/// η = 0 closed form r₀ = ħ²(l(l+N−2) + (N−1)(N−3)/4)/k.
double coulomb_effective_minimum_radius(const ModelParams& params, int l);

}  // namespace taubnut::spectrum
