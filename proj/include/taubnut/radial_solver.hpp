#pragma once

// Finite-difference radial eigensolvers used as oracles for the closed-form spectrum.

#include <Eigen/Dense>

#include <vector>

#include "taubnut/errors.hpp"
#include "taubnut/model.hpp"
#include "taubnut/spectrum.hpp"

namespace taubnut::radial {

enum class GridKind {
  q_uniform,        ///< uniform in the flattened coordinate Q, Dirichlet at both ends
  r_cell_centered,  ///< r_i = (i + ½)h on (0, r_max), zero flux through r = 0
  r_vertex          ///< r_i = r_lower + (i + 1)h, Dirichlet at r_lower and r_max
};

struct RadialGrid {
  GridKind kind = GridKind::q_uniform;
  std::vector<double> Q_nodes;
  std::vector<double> r_nodes;
  int M = 0;
  double Q_lower = 0.0;  ///< Q at the lower Dirichlet end
  double Q_max = 0.0;    ///< Q at the upper Dirichlet end
  double r_max = 0.0;
  double spacing = 0.0;  ///< uniform step in the grid's own coordinate
};

/// Lower truncation ε = 1e−6 · ħ²/|k| (or · max(|η|, 1) when k = 0).
double lower_truncation(const ModelParams& params);

/// Q-uniform grid with M interior nodes between Q(r_lower + ε) and
/// Q_max = Q_lower + 14 ln10 · ħ/√(−2 E_scale). r_nodes come from inverting Q(r).
/// Throws BadParams unless E_scale < 0 and 1024 ≤ M ≤ 2²⁰.
RadialGrid build_grid(const ModelParams& params, double E_scale, int M, double epsilon = -1.0);

struct BoundStateSet {
  int l = 0;
  std::vector<double> energies;         ///< Richardson values (4E_2M − E_M)/3, ascending
  std::vector<double> error_estimates;  ///< |E_2M − E_M|/3 plus any truncation sensitivity
  std::vector<double> coarse;           ///< eigenvalues on M nodes
  std::vector<double> fine;             ///< eigenvalues on 2M nodes
  std::vector<std::vector<double>> vectors;  ///< fine-grid eigenvectors, orthonormal in the discrete measure
  RadialGrid grid;                           ///< the fine grid
};

struct SolverOptions {
  int M = 16384;        ///< coarse node count; the fine grid has 2M
  double r_max = 0.0;   ///< 0 selects r_max from the decay estimate of the top level
  bool vectors = true;  ///< compute fine-grid eigenvectors
};

/// Lowest `count` radial levels for angular momentum l.
///
/// The primary discretization is the flux form of the radial equation for
/// χ = Φ/r^l with D = 2l + N,
///   −ħ²(r^{D−1}χ′)′ − 2k r^{D−2}χ = E · 2r^{D−2}(r + η) χ,
/// which is the direct-gauge equation multiplied by 2r^{D−1}(η+r)/r. The
/// generalized problem is symmetrized by W^{−1/2} and solved by Sturm bisection on
/// M and 2M nodes, then Richardson-extrapolated. Throws NoBoundStates when the
/// discrete operator has no negative eigenvalue (checked numerically, e.g. k ≤ 0)
/// or fewer than `count`.
BoundStateSet solve_bound_states(const ModelParams& params, int l, int count, const SolverOptions& options = {});

/// Same spectrum from the 3-point stencil of −(ħ²/2)φ″(Q) + Û_eff,l φ on the
/// Q-uniform grid. Valid when the inverse-square coefficient of Û_eff,l near the
/// origin keeps Dirichlet truncation harmless (l ≥ 1 or N ≥ 4 for η > 0); the
/// ε-halving sensitivity is folded into error_estimates.
BoundStateSet solve_bound_states_q(const ModelParams& params, int l, int count, const SolverOptions& options = {});

/// Observed order log₂(|E_M − E_2M| / |E_2M − E_4M|) of level `index`.
double convergence_order(const ModelParams& params, int l, int index, int M);

/// Discrete weighted L² norm of (Ĥ_c,l − E)Φ_c relative to ‖Φ_c‖ at the nodes of
/// `grid`, for Φ_c from the closed form. The operator is applied with a node-local
/// 5-point stencil in r of width 1e−3·r, so the residual measures the closed form
/// rather than the grid's own truncation error.
double conformal_residual(const ModelParams& params, const spectrum::QuantumLevel& level, const RadialGrid& grid);

/// Same for the direct-gauge operator acting on Φ = (1+η/r)^{(N−2)/4} Φ_c.
double direct_residual(const ModelParams& params, const spectrum::QuantumLevel& level, const RadialGrid& grid);

/// U(−α(E), 2l+N−1, 2|η|√(−2E)/ħ), whose zeros in E are the η < 0 levels.
double tricomi_condition(const ModelParams& params, int l, double E);

/// Direct-gauge solution ρ^l e^{−ρ/2} U(−α, β, ρ) for η < 0, valid for r ≥ |η|.
double tricomi_eigenfunction(const ModelParams& params, int l, double E, double r);

struct EnergyBracket {
  double lower = 0.0;  ///< most negative energy searched; 0 selects a default
  double upper = 0.0;  ///< least negative energy searched; 0 selects a default
};

struct NegativeEtaSpectrum {
  std::vector<double> energies;     ///< Tricomi roots, ascending
  std::vector<double> fd_energies;  ///< Dirichlet finite-difference values
  std::vector<double> rel_diff;     ///< |E − E_fd| / |E|
  double max_rel_diff = 0.0;
};

/// η < 0 levels from the Tricomi boundary condition at r = |η|: a log-spaced scan
/// of E in the bracket, then Brent–Dekker refinement to |ΔE| ≤ 1e−12. Each root is
/// compared with a Dirichlet finite-difference solve on (|η|, r_max). Throws
/// SectorError unless η < 0 and k > 0, and NoRootInBracket when fewer than `count`
/// roots are found.
NegativeEtaSpectrum dirichlet_spectrum_negative_eta(const ModelParams& params, int l, EnergyBracket bracket,
                                                    int count, const SolverOptions& fd_options = {});

/// Gram matrix of the normalized closed-form eigenfunctions with quantum number l
/// and radial numbers `ns`, in `gauge`, integrated with the measure of
/// `measure_gauge` (defaults to `gauge`; a different value is a negative control).
Eigen::MatrixXd orthogonality_matrix(const ModelParams& params, int l, const std::vector<int>& ns,
                                     spectrum::Gauge gauge);
Eigen::MatrixXd orthogonality_matrix(const ModelParams& params, int l, const std::vector<int>& ns,
                                     spectrum::Gauge gauge, spectrum::Gauge measure_gauge);

}  // namespace taubnut::radial
