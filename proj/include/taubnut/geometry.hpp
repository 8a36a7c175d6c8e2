#pragma once

// Riemannian data of the conformally flat manifold ds² = (1 + η/r) dq².

#include "taubnut/model.hpp"

namespace taubnut::geometry {

/// f(r) = √(1 + η/r).
double conformal_factor(const ModelParams& params, double r);

/// Closed-form scalar curvature η(N−1)[4(N−3)r + 3η(N−2)] / (4r(η+r)³).
double scalar_curvature(const ModelParams& params, double r);

/// Sum of the absolute values of the two terms of scalar_curvature; a comparison
/// scale that stays positive where R itself changes sign.
double scalar_curvature_magnitude(const ModelParams& params, double r);

/// Step used by scalar_curvature_numeric: a fixed fraction of the distance from r
/// to the singular end of the domain, r − lower.
double curvature_fd_step(const ModelParams& params, double r);

/// Ricci scalar assembled from finite-difference Christoffel symbols of the
/// Cartesian metric f(|q|)² δᵢⱼ, evaluated at q = (r, 0, …, 0).
///
/// Both the metric derivatives and the Christoffel derivatives use 5-point
/// central stencils with step h = curvature_fd_step(params, r). With d = r − lower
/// the truncation error is O((h/d)⁴) and the roundoff floor is near ε(d/h)², so
/// the relative accuracy is the same at every radius. Only the non-constant part
/// η/|q| of the metric is differenced.
double scalar_curvature_numeric(const ModelParams& params, double r);

struct EmbeddingPoint {
  double x_radial = 0.0;  ///< radius r·f(r) of the embedded sphere
  double z = 0.0;         ///< height, z(1) = 0
};

/// Codimension-one Euclidean embedding of the manifold; η ≥ 0 only.
EmbeddingPoint embedding_profile(const ModelParams& params, double r);

/// z′(r)² + (d/dr[r f(r)])² − f(r)², which vanishes for a true isometric embedding.
double embedding_metric_residual(const ModelParams& params, double r);

struct IntrinsicPotentials {
  double coulomb = 0.0;     ///< U_C(r), normalized so U_C = −2f(r)/η
  double oscillator = 0.0;  ///< U_O(r) = C r/(η+r) + D with C = k/η, D = −C
};

/// Intrinsic Coulomb and oscillator potentials of the metric. U_C comes from the
/// quadrature of 1/(r′² f(r′)); U_O is the affine image of 1/U_C² that matches
/// the deformed potential. Throws Unsupported for η = 0.
IntrinsicPotentials intrinsic_potentials(const ModelParams& params, double r);

}  // namespace taubnut::geometry
