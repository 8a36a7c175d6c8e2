#include "taubnut/geometry.hpp"

#include <array>
#include <cmath>
#include <sstream>
#include <vector>

#include "taubnut/detail/quadrature.hpp"
#include "taubnut/errors.hpp"

namespace taubnut {

void ModelParams::validate() const {
  if (N < 2) throw BadParams("dimension N must be at least 2, got " + std::to_string(N));
  if (!(hbar > 0.0) || !std::isfinite(hbar)) throw BadParams("hbar must be positive and finite");
  if (!std::isfinite(eta) || !std::isfinite(k)) throw BadParams("eta and k must be finite");
}

std::string ModelParams::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "N=" << N << " eta=" << eta << " k=" << k << " hbar=" << hbar;
  return os.str();
}

RadialInterval radial_domain(const ModelParams& params) {
  return RadialInterval{params.eta < 0.0 ? -params.eta : 0.0};
}

void require_in_domain(const ModelParams& params, double r, const char* where) {
  const RadialInterval domain = radial_domain(params);
  if (!domain.contains(r)) {
    std::ostringstream os;
    os.precision(17);
    os << where << ": r = " << r << " outside (" << domain.lower << ", inf)";
    throw DomainError(os.str());
  }
}

}  // namespace taubnut

namespace taubnut::geometry {
namespace {

constexpr double kCurvatureStepFraction = 1e-3;

// The oracle runs in extended precision: for N = 3 the leading 1/r³ parts of the
// Ricci terms cancel, which would otherwise amplify roundoff by r/η.
using Real = long double;

constexpr std::array<int, 4> kOffsets = {-2, -1, 1, 2};
constexpr std::array<Real, 4> kFirstDerivWeights = {1.0L / 12.0L, -8.0L / 12.0L, 8.0L / 12.0L, -1.0L / 12.0L};

using Vec = std::vector<Real>;

Real norm(const Vec& q) {
  Real s = 0.0L;
  for (Real v : q) s += v * v;
  return std::sqrt(s);
}

// The metric is gᵢⱼ = (1 + μ(q)) δᵢⱼ with μ = η/|q|. The identity part has
// vanishing derivatives, so differencing is applied to μ only.
class ConformalMetric {
 public:
  ConformalMetric(const ModelParams& params, Real h) : params_(params), n_(params.N), h_(h) {}

  Real perturbation(const Vec& q) const {
    const Real r = norm(q);
    require_in_domain(params_, static_cast<double>(r), "scalar_curvature_numeric stencil");
    return static_cast<Real>(params_.eta) / r;
  }

  // ∂ₘ gᵢⱼ for all m, i, j, flattened as [m][i][j].
  Vec metric_derivatives(const Vec& q) const {
    Vec dg(static_cast<std::size_t>(n_ * n_ * n_), 0.0);
    Vec shifted = q;
    for (int m = 0; m < n_; ++m) {
      Real d = 0.0L;
      for (std::size_t s = 0; s < kOffsets.size(); ++s) {
        shifted[m] = q[m] + kOffsets[s] * h_;
        d += kFirstDerivWeights[s] * perturbation(shifted);
      }
      shifted[m] = q[m];
      d /= h_;
      for (int i = 0; i < n_; ++i) dg[index3(m, i, i)] = d;
    }
    return dg;
  }

  // Γᵏᵢⱼ = ½ gᵏˡ (∂ᵢ gⱼₗ + ∂ⱼ gᵢₗ − ∂ₗ gᵢⱼ), flattened as [k][i][j].
  Vec christoffel(const Vec& q) const {
    const Vec dg = metric_derivatives(q);
    const Real inverse_diag = 1.0L / (1.0L + perturbation(q));
    Vec gamma(static_cast<std::size_t>(n_ * n_ * n_), 0.0);
    for (int k = 0; k < n_; ++k) {
      for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < n_; ++j) {
          // gᵏˡ is diagonal, so only l = k contributes.
          const Real s = dg[index3(i, j, k)] + dg[index3(j, i, k)] - dg[index3(k, i, j)];
          gamma[index3(k, i, j)] = 0.5 * inverse_diag * s;
        }
      }
    }
    return gamma;
  }

  Real ricci_scalar(const Vec& q) const {
    const std::size_t n3 = static_cast<std::size_t>(n_ * n_ * n_);
    const Vec gamma = christoffel(q);

    // dgamma[m] holds ∂ₘ Γᵏᵢⱼ.
    std::vector<Vec> dgamma(static_cast<std::size_t>(n_), Vec(n3, 0.0));
    Vec shifted = q;
    for (int m = 0; m < n_; ++m) {
      for (std::size_t s = 0; s < kOffsets.size(); ++s) {
        shifted[m] = q[m] + kOffsets[s] * h_;
        const Vec g = christoffel(shifted);
        for (std::size_t a = 0; a < n3; ++a) dgamma[m][a] += kFirstDerivWeights[s] * g[a];
      }
      shifted[m] = q[m];
      for (Real& v : dgamma[m]) v /= h_;
    }

    const Real inverse_diag = 1.0L / (1.0L + perturbation(q));
    Real scalar = 0.0L;
    for (int i = 0; i < n_; ++i) {
      // Only Rᵢᵢ is needed because gⁱʲ is diagonal.
      const int j = i;
      Real ricci = 0.0L;
      for (int k = 0; k < n_; ++k) {
        ricci += dgamma[k][index3(k, i, j)] - dgamma[j][index3(k, i, k)];
        for (int l = 0; l < n_; ++l) {
          ricci += gamma[index3(k, k, l)] * gamma[index3(l, i, j)] -
                   gamma[index3(k, j, l)] * gamma[index3(l, i, k)];
        }
      }
      scalar += inverse_diag * ricci;
    }
    return scalar;
  }

 private:
  std::size_t index3(int a, int b, int c) const {
    return static_cast<std::size_t>((a * n_ + b) * n_ + c);
  }

  const ModelParams& params_;
  int n_;
  Real h_;
};

}  // namespace

double conformal_factor(const ModelParams& params, double r) {
  params.validate();
  require_in_domain(params, r, "conformal_factor");
  return std::sqrt(1.0 + params.eta / r);
}

double scalar_curvature(const ModelParams& params, double r) {
  params.validate();
  require_in_domain(params, r, "scalar_curvature");
  const double eta = params.eta;
  const double n = params.N;
  const double s = eta + r;
  return eta * (n - 1.0) * (4.0 * (n - 3.0) * r + 3.0 * eta * (n - 2.0)) / (4.0 * r * s * s * s);
}

double scalar_curvature_magnitude(const ModelParams& params, double r) {
  params.validate();
  require_in_domain(params, r, "scalar_curvature_magnitude");
  const double eta = std::abs(params.eta);
  const double n = params.N;
  const double s = std::abs(params.eta + r);
  return eta * (n - 1.0) * (4.0 * std::abs(n - 3.0) * r + 3.0 * eta * (n - 2.0)) / (4.0 * r * s * s * s);
}

double curvature_fd_step(const ModelParams& params, double r) {
  return kCurvatureStepFraction * (r - radial_domain(params).lower);
}

double scalar_curvature_numeric(const ModelParams& params, double r) {
  params.validate();
  require_in_domain(params, r, "scalar_curvature_numeric");
  if (params.eta == 0.0) return 0.0 * r;
  const double h = curvature_fd_step(params, r);
  Vec q(static_cast<std::size_t>(params.N), 0.0L);
  q[0] = r;
  return static_cast<double>(ConformalMetric(params, h).ricci_scalar(q));
}

EmbeddingPoint embedding_profile(const ModelParams& params, double r) {
  params.validate();
  if (params.eta < 0.0) throw Unsupported("embedding_profile: no embedding for eta < 0");
  require_in_domain(params, r, "embedding_profile");
  const double eta = params.eta;
  EmbeddingPoint point;
  point.x_radial = std::sqrt(r * r + eta * r);
  if (eta == 0.0 || r == 1.0) return point;

  // With r′ = t² the integrand √(η(4r′+3η)/(4r′(r′+η))) dr′ becomes the smooth
  // √(η(4t²+3η)/(t²+η)) dt, free of the r′^{-1/2} endpoint singularity.
  // The map t = 1 + (√r − 1)u onto [0, 1] keeps Boost's error estimate sane when r ≈ 1.
  const double width = std::sqrt(r) - 1.0;
  auto integrand = [eta, width](double u) {
    const double t = 1.0 + width * u;
    const double t2 = t * t;
    return width * std::sqrt(eta * (4.0 * t2 + 3.0 * eta) / (t2 + eta));
  };
  point.z = detail::integrate_gk(integrand, 0.0, 1.0, 1e-13).value;
  return point;
}

double embedding_metric_residual(const ModelParams& params, double r) {
  params.validate();
  if (params.eta < 0.0) throw Unsupported("embedding_metric_residual: no embedding for eta < 0");
  require_in_domain(params, r, "embedding_metric_residual");
  const double eta = params.eta;
  const double dz2 = eta * (4.0 * r + 3.0 * eta) / (4.0 * r * (r + eta));
  const double dx = (2.0 * r + eta) / (2.0 * std::sqrt(r * r + eta * r));
  const double f2 = 1.0 + eta / r;
  return dz2 + dx * dx - f2;
}

IntrinsicPotentials intrinsic_potentials(const ModelParams& params, double r) {
  params.validate();
  if (params.eta == 0.0) {
    throw Unsupported("intrinsic_potentials: normalization constants need eta != 0");
  }
  require_in_domain(params, r, "intrinsic_potentials");
  const double eta = params.eta;

  // ∫_r^∞ ds/(s² f(s)) with u = 1/s.
  auto integrand = [eta](double u) { return 1.0 / std::sqrt(1.0 + eta * u); };
  const double tail = detail::integrate_tanh_sinh(integrand, 0.0, 1.0 / r, 1e-15).value;

  IntrinsicPotentials out;
  out.coulomb = -2.0 / eta - tail;
  const double raw_oscillator = 1.0 / (out.coulomb * out.coulomb);  // = η² r / (4(η+r))
  const double c = params.k / eta;
  const double d = -c;
  out.oscillator = c * (4.0 / (eta * eta)) * raw_oscillator + d;
  return out;
}

}  // namespace taubnut::geometry
