#include "taubnut/spectrum.hpp"

#include <boost/math/tools/minima.hpp>

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "taubnut/detail/quadrature.hpp"
#include "taubnut/special_functions.hpp"

namespace taubnut::spectrum {
namespace {

void require_quantum_numbers(int n, int l) {
  if (n < 0 || l < 0) throw BadParams("quantum numbers n, l must be nonnegative");
}

double laguerre_argument_scale(const ModelParams& params, const QuantumLevel& level) {
  const double s = principal_s(params, level.frak_n);
  return level.K / (params.hbar * params.hbar * s);
}

std::uint64_t binomial(long long n, long long k) {
  if (k < 0 || n < k) return 0;
  k = std::min(k, n - k);
  std::uint64_t c = 1;
  for (long long i = 1; i <= k; ++i) c = c * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return c;
}

// ∫₀^{u_max} F(r(u)) dr with r = u/λ.
template <class F>
double radial_integral(F&& integrand, double lambda, double u_max) {
  auto in_u = [&](double u) { return integrand(u / lambda) / lambda; };
  const int panels = std::max(8, static_cast<int>(u_max / 8.0));
  return detail::integrate_gk_panels(in_u, 0.0, u_max, panels, 1e-13).value;
}

}  // namespace

double principal_s(const ModelParams& params, int frak_n) {
  return frak_n + 0.5 * (params.N - 1);
}

double coulomb_energy(const ModelParams& params, int n, int l) {
  params.validate();
  require_quantum_numbers(n, l);
  if (!(params.k > 0.0)) throw NonAttractive("coulomb_energy: requires k > 0");
  const double s = principal_s(params, n + l);
  return -params.k * params.k / (2.0 * params.hbar * params.hbar * s * s);
}

QuantumLevel energy(const ModelParams& params, int n, int l, Branch branch) {
  params.validate();
  require_quantum_numbers(n, l);
  if (!(params.k > 0.0) || params.eta < 0.0) {
    throw SectorError("closed-form spectrum needs k > 0 and eta >= 0 (got " + params.describe() +
                      "); use the numeric solver");
  }
  const double k = params.k;
  const double eta = params.eta;
  const double h2s2 = std::pow(params.hbar * principal_s(params, n + l), 2);
  const double B = h2s2 + k * eta;
  const double root = std::sqrt(h2s2 * h2s2 + 2.0 * h2s2 * k * eta);

  QuantumLevel level;
  level.n = n;
  level.l = l;
  level.frak_n = n + l;
  if (branch == Branch::physical) {
    level.E = -k * k / (B + root);
  } else {
    if (eta == 0.0) throw SectorError("flipped branch does not exist at eta = 0");
    // Vieta: the product of the roots is k²/η², which avoids the cancellation in B − root.
    level.E = -(B + root) / (eta * eta);
  }
  level.K = k + eta * level.E;
  return level;
}

double quadratic_residual(const ModelParams& params, const QuantumLevel& level) {
  const double s = principal_s(params, level.frak_n);
  const double E = level.E;
  const double eta = params.eta;
  return eta * eta * E * E + 2.0 * (params.k * eta + params.hbar * params.hbar * s * s) * E +
         params.k * params.k;
}

double casimir_relation_residual(const ModelParams& params, const QuantumLevel& level) {
  const double s = principal_s(params, level.frak_n);
  const double b = params.eta * level.E + params.k;
  return -b * b / (2.0 * level.E) - params.hbar * params.hbar * s * s;
}

EnergySeries energy_series(const ModelParams& params, int n, int l) {
  EnergySeries out;
  out.E0 = coulomb_energy(params, n, l);
  const double s = principal_s(params, n + l);
  const double hs2 = std::pow(params.hbar * s, 2);
  const double k = params.k;
  out.c1 = k * k * k / (2.0 * hs2 * hs2);
  out.c2 = -5.0 * k * k * k * k / (8.0 * hs2 * hs2 * hs2);
  return out;
}

double kummer_alpha(const ModelParams& params, int l, double E) {
  if (!(E < 0.0)) throw PositiveEnergy("kummer_alpha: requires E < 0");
  return (params.k + params.eta * E) / (params.hbar * std::sqrt(-2.0 * E)) - l - 0.5 * (params.N - 1);
}

double kummer_beta(const ModelParams& params, int l) { return 2.0 * l + params.N - 1; }

double kummer_rho(const ModelParams& params, double E, double r) {
  if (!(E < 0.0)) throw PositiveEnergy("kummer_rho: requires E < 0");
  return 2.0 * r * std::sqrt(-2.0 * E) / params.hbar;
}

double eigenfunction_radial(const ModelParams& params, const QuantumLevel& level, Gauge gauge,
                            double r) {
  params.validate();
  require_in_domain(params, r, "eigenfunction_radial");
  const double lambda = laguerre_argument_scale(params, level);
  const double u = lambda * r;
  double phi = std::pow(r, level.l) * std::exp(-u) *
               special::laguerre(level.n, 2.0 * level.l + params.N - 2.0, 2.0 * u);
  if (gauge == Gauge::conformal) phi *= std::pow(1.0 + params.eta / r, 0.25 * (2 - params.N));
  return phi;
}

double radial_measure(const ModelParams& params, Gauge gauge, double r) {
  const double f2 = 1.0 + params.eta / r;
  const double rN = std::pow(r, params.N - 1);
  return gauge == Gauge::direct ? rN * f2 : rN * std::pow(f2, 0.5 * params.N);
}

double normalization_constant(const ModelParams& params, const QuantumLevel& level, Gauge gauge) {
  params.validate();
  if (!(level.E < 0.0) || !(level.K > 0.0)) throw BadParams("normalization_constant: needs a bound level");
  if (params.eta < 0.0) throw SectorError("normalization_constant: closed-form levels need eta >= 0");
  const double lambda = laguerre_argument_scale(params, level);
  const double u_max = 50.0 + 10.0 * (level.n + level.l + params.N);
  const double norm2 = radial_integral(
      [&](double r) {
        if (r <= 0.0) return 0.0;
        const double phi = eigenfunction_radial(params, level, gauge, r);
        return phi * phi * radial_measure(params, gauge, r);
      },
      lambda, u_max);
  if (!(norm2 > 0.0) || !std::isfinite(norm2)) throw IntegrationFailure("normalization_constant: bad norm");
  return 1.0 / std::sqrt(norm2);
}

double overlap(const ModelParams& params, const QuantumLevel& a, const QuantumLevel& b,
               Gauge function_gauge, Gauge measure_gauge) {
  if (a.l != b.l) throw BadParams("overlap: levels must share l");
  const double ca = normalization_constant(params, a, function_gauge);
  const double cb = normalization_constant(params, b, function_gauge);
  // The slower-decaying exponential sets the integration scale.
  const double lambda = std::min(laguerre_argument_scale(params, a), laguerre_argument_scale(params, b));
  const double u_max = 50.0 + 10.0 * (std::max(a.n, b.n) + a.l + params.N);
  return radial_integral(
      [&](double r) {
        if (r <= 0.0) return 0.0;
        return ca * eigenfunction_radial(params, a, function_gauge, r) * cb *
               eigenfunction_radial(params, b, function_gauge, r) * radial_measure(params, measure_gauge, r);
      },
      lambda, u_max);
}

std::uint64_t harmonic_dimension(int N, int l) {
  if (N < 2 || l < 0) throw BadParams("harmonic_dimension: need N >= 2, l >= 0");
  return binomial(l + N - 1, N - 1) - binomial(l + N - 3, N - 1);
}

std::uint64_t degeneracy(int N, int frak_n) {
  if (frak_n < 0) throw BadParams("degeneracy: principal label must be nonnegative");
  std::uint64_t total = 0;
  for (int l = 0; l <= frak_n; ++l) total += harmonic_dimension(N, l);
  return total;
}

double quantum_effective_potential(const ModelParams& params, int l, double r) {
  params.validate();
  require_in_domain(params, r, "quantum_effective_potential");
  const double eta = params.eta;
  const double h2 = params.hbar * params.hbar;
  const double s = eta + r;
  const double N = params.N;
  const double curvature_term = -h2 * (eta * eta + 4.0 * r * r) / (16.0 * r * r * s * s);
  const double centrifugal = h2 * (l * (l + N - 2.0) + 0.25 * (N - 2.0) * (N - 2.0)) / (r * r);
  return r / (2.0 * s) * (curvature_term + centrifugal - 2.0 * params.k / r);
}

double coulomb_effective_minimum_radius(const ModelParams& params, int l) {
  const double N = params.N;
  return params.hbar * params.hbar * (l * (l + N - 2.0) + 0.25 * (N - 1.0) * (N - 3.0)) / params.k;
}

PotentialMinimum quantum_effective_minimum(const ModelParams& params, int l) {
  params.validate();
  if (l < 0) throw BadParams("quantum_effective_minimum: l must be nonnegative");
  if (params.N == 2 && l == 0) {
    throw NoMinimum(NoMinimum::Kind::no_local_minimum, "N = 2, l = 0: effective potential has no local minimum");
  }
  const double lower = radial_domain(params).lower;
  // Length scale that covers both the η-wall and the Bohr-like radius.
  const double scale = std::max({std::abs(params.eta), params.hbar * params.hbar / std::max(std::abs(params.k), 1e-300), 1.0});
  const double r_lo = lower > 0.0 ? lower * (1.0 + 1e-9) : 1e-9 * scale;
  const double r_hi = 1e6 * scale;
  const int samples = 4000;
  std::vector<double> rs(samples), us(samples);
  const double step = std::log(r_hi / r_lo) / (samples - 1);
  for (int i = 0; i < samples; ++i) {
    rs[i] = r_lo * std::exp(step * i);
    us[i] = quantum_effective_potential(params, l, rs[i]);
  }
  for (int i = 1; i + 1 < samples; ++i) {
    if (us[i] <= us[i - 1] && us[i] < us[i + 1]) {
      auto f = [&](double r) { return quantum_effective_potential(params, l, r); };
      const auto best = boost::math::tools::brent_find_minima(f, rs[i - 1], rs[i + 1], 52);
      return {best.first, best.second};
    }
  }
  if (us[0] < us[1]) {
    throw NoMinimum(NoMinimum::Kind::unbounded_at_origin,
                    "effective potential decreases to -inf at the lower end of the domain");
  }
  throw NoMinimum(NoMinimum::Kind::no_local_minimum, "effective potential has no local minimum");
}

}  // namespace taubnut::spectrum
