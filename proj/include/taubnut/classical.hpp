#pragma once

// Classical deformed Kepler system H = |q| p² / (2(η+|q|)) − k/(η+|q|).

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "taubnut/errors.hpp"
#include "taubnut/model.hpp"
#include "taubnut/report.hpp"

namespace taubnut::classical {

struct PhasePoint {
  std::vector<double> q;
  std::vector<double> p;
};

/// Reduced radial state; L2 is the conserved value of 𝐋².
struct RadialPhasePoint {
  double r = 0.0;
  double p_r = 0.0;
  double L2 = 0.0;
};

struct InvariantSet {
  double H = 0.0;
  std::vector<double> C_up;    ///< C^(m) for m = 2..N, index m−2
  std::vector<double> C_down;  ///< C_(m) for m = 2..N, index m−2
  double L2 = 0.0;
  std::vector<double> R;  ///< deformed Runge–Lenz vector
};

struct TaubNutParams {
  double m = 1.0;
  double mu = 0.0;
};

struct TaubNutMapping {
  ModelParams params;   ///< N = 3, η = 4m, k = −μ²/(8m)
  double energy_shift;  ///< μ²/(2(4m)²), added to H
  double L2_shift;      ///< μ², added to 𝐋² to absorb the centrifugal remainder
};

using PhaseFunction = std::function<double(const PhasePoint&)>;

/// Orbit left the radial domain during integration.
class DomainBreach : public DomainError {
 public:
  DomainBreach(const std::string& what, PhasePoint last_valid, double last_time)
      : DomainError(what), last_valid_(std::move(last_valid)), last_time_(last_time) {}
  const PhasePoint& last_valid() const noexcept { return last_valid_; }
  double last_time() const noexcept { return last_time_; }

 private:
  PhasePoint last_valid_;
  double last_time_;
};

double radius(const PhasePoint& x);

/// Throws BadParams on dimension mismatch and DomainError when |q| is outside the domain.
void validate_point(const ModelParams& params, const PhasePoint& x);

double hamiltonian(const ModelParams& params, const PhasePoint& x);
double radial_hamiltonian(const ModelParams& params, const RadialPhasePoint& s);

/// r = |q|, p_r = q·p/|q|, 𝐋² = |q|²p² − (q·p)².
RadialPhasePoint to_radial(const ModelParams& params, const PhasePoint& x);

/// Jᵢⱼ = qᵢpⱼ − qⱼpᵢ with zero-based indices.
double angular_momentum(const PhasePoint& x, int i, int j);

/// 𝓡ᵢ = pᵢ(q·p) − qᵢp² + qᵢ(ηH + k)/|q|.
std::vector<double> runge_lenz(const ModelParams& params, const PhasePoint& x);

InvariantSet invariants(const ModelParams& params, const PhasePoint& x);

/// 𝐑² − 2𝐋²H − (ηH + k)².
double functional_relation_residual(const ModelParams& params, const PhasePoint& x);

/// Central-difference Poisson bracket Σᵢ ∂f/∂qᵢ ∂g/∂pᵢ − ∂f/∂pᵢ ∂g/∂qᵢ with
/// per-coordinate step h_rel·(1 + |xᵢ|).
double poisson_bracket(const PhaseFunction& f, const PhaseFunction& g, const PhasePoint& x,
                       double h_rel = 1e-5);

/// Same bracket, but first checks that every stencil point stays inside the domain.
double poisson_bracket(const ModelParams& params, const PhaseFunction& f,
                       const PhaseFunction& g, const PhasePoint& x, double h_rel = 1e-5);

/// Evaluates the so(N+1) brackets of J̃ (indices 0..N), the quadratic bracket
/// {𝓡ᵢ,𝓡ⱼ} = −2H Jᵢⱼ, the vector rule {Jᵢⱼ,𝓡ₖ} = δᵢₖ𝓡ⱼ − δⱼₖ𝓡ᵢ, conservation
/// {H,·} = 0, and the Casimir identity. Throws PositiveEnergy when H ≥ 0.
VerificationReport so_algebra_check(const ModelParams& params, const PhasePoint& x,
                                    double tolerance = 1e-6);

/// Q = √(r(η+r)) + η ln(√r + √(η+r)), so that dQ/dr = √(1+η/r).
double flattened_coordinate(const ModelParams& params, double r);

/// Inverse of flattened_coordinate by safeguarded Newton iteration, |ΔQ| ≤ 4ε(1+|Q|).
double radius_from_flattened(const ModelParams& params, double Q);

struct CanonicalPair {
  double Q = 0.0;
  double P = 0.0;
};

/// (Q, P) with P = √(r/(η+r))·p_r; {Q, P} = 1.
CanonicalPair canonical_QP(const ModelParams& params, double r, double p_r);

/// L2/(2r(η+r)) − k/(η+r).
double classical_effective_potential(const ModelParams& params, double L2, double r);

TaubNutMapping taub_nut_map(const TaubNutParams& tn);

/// p²/(2(1+4m/r)) + μ²(1+4m/r)/(2(4m)²) for a 3-vector phase point.
double taub_nut_hamiltonian(const TaubNutParams& tn, const PhasePoint& x);

/// Singular values (descending) of the (2N−1)×2N gradient matrix of
/// {H, C^(m), C_(m), 𝓡_i} with C_(N) omitted since it equals C^(N).
std::vector<double> independence_singular_values(const ModelParams& params, const PhasePoint& x,
                                                 int runge_lenz_index = 0);

enum class Scheme {
  implicit_midpoint,  ///< second order
  triple_jump         ///< fourth-order symmetric composition of implicit midpoint
};

struct InvariantDrift {
  double H = 0.0;   ///< |H − H₀| / |H₀|
  double L2 = 0.0;  ///< |𝐋² − 𝐋²₀| / 𝐋²₀ (absolute when 𝐋²₀ = 0)
  double R = 0.0;   ///< maxᵢ |𝓡ᵢ − 𝓡ᵢ₀| / max(|𝐑₀|, |ηH₀ + k|)
};

struct Trajectory {
  std::vector<double> times;
  std::vector<PhasePoint> points;
  std::vector<InvariantDrift> drifts;
  InvariantDrift max_drift;
  InvariantSet initial;
  bool bound = false;  ///< H₀ < 0
};

struct IntegratorOptions {
  Scheme scheme = Scheme::triple_jump;
  double tolerance = 1e-13;
  int max_iterations = 50;
};

/// Symplectic integration of Hamilton's equations. Records the initial state and
/// every `sample_every`-th step. Throws DomainBreach when an implicit stage or a
/// completed step leaves the domain and ConvergenceFailure when the fixed-point
/// iteration stalls.
Trajectory integrate_orbit(const ModelParams& params, const PhasePoint& x0, double dt, long steps,
                           long sample_every, const IntegratorOptions& options = {});

/// Random phase point with |q| in [lower + 0.3, lower + 2.3] and kinetic energy
/// between 5% and 70% of |V|, so H ≤ −0.3|V| stays clear of the threshold where
/// 1/√(−2H) amplifies finite-difference error. Requires k > 0.
PhasePoint random_bound_point(const ModelParams& params, std::mt19937_64& rng);

/// Random initial data for orbit tests: |q| in [lower + 0.5s, lower + 2s] with
/// s = max(1, 10|η|) for η < 0 and s = 1 otherwise, momentum orthogonal to q,
/// kinetic energy between 30% and 70% of |V|. In the Kepler limit the pericentre
/// then stays above 0.43|q|, and for η < 0 the centrifugal barrier shields the wall.
PhasePoint random_orbit_point(const ModelParams& params, std::mt19937_64& rng);

/// Random phase point with |q| inside the domain, for identities that hold everywhere.
PhasePoint random_phase_point(const ModelParams& params, std::mt19937_64& rng);

}  // namespace taubnut::classical
