#include "taubnut/classical.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace taubnut::classical {
namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Σ J_ij² over lo ≤ i < j < hi.
double block_casimir(const PhasePoint& x, int lo, int hi) {
  double s = 0.0;
  for (int i = lo; i < hi; ++i) {
    for (int j = i + 1; j < hi; ++j) {
      const double J = angular_momentum(x, i, j);
      s += J * J;
    }
  }
  return s;
}

struct Gradient {
  std::vector<double> dq;  // ∂H/∂q
  std::vector<double> dp;  // ∂H/∂p
};

Gradient hamiltonian_gradient(const ModelParams& params, const std::vector<double>& q,
                              const std::vector<double>& p) {
  const double r = std::sqrt(dot(q, q));
  const double s = params.eta + r;
  const double p2 = dot(p, p);
  const double dH_dr = 0.5 * p2 * params.eta / (s * s) + params.k / (s * s);
  Gradient g{std::vector<double>(q.size()), std::vector<double>(p.size())};
  for (std::size_t i = 0; i < q.size(); ++i) {
    g.dq[i] = dH_dr * q[i] / r;
    g.dp[i] = r * p[i] / s;
  }
  return g;
}

// ∂F/∂x for x = (q, p) by central differences with steps h_rel·(1+|xᵢ|).
std::vector<double> numeric_gradient(const PhaseFunction& F, const PhasePoint& x, double h_rel) {
  const std::size_t n = x.q.size();
  std::vector<double> grad(2 * n);
  PhasePoint y = x;
  for (std::size_t a = 0; a < 2 * n; ++a) {
    double& coord = a < n ? y.q[a] : y.p[a - n];
    const double base = coord;
    const double h = h_rel * (1.0 + std::abs(base));
    coord = base + h;
    const double fp = F(y);
    coord = base - h;
    const double fm = F(y);
    coord = base;
    grad[a] = (fp - fm) / (2.0 * h);
  }
  return grad;
}

double bracket_from_gradients(const std::vector<double>& gf, const std::vector<double>& gg) {
  const std::size_t n = gf.size() / 2;
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += gf[i] * gg[n + i] - gf[n + i] * gg[i];
  return s;
}

struct StepFailure {
  bool converged = true;
  bool left_domain = false;
};

// One implicit-midpoint step x₁ = x₀ + τ J∇H((x₀+x₁)/2) by fixed-point iteration.
StepFailure midpoint_step(const ModelParams& params, PhasePoint& x, double tau,
                          const IntegratorOptions& opt) {
  const std::size_t n = x.q.size();
  PhasePoint next = x;
  std::vector<double> qm(n), pm(n);
  const RadialInterval domain = radial_domain(params);
  for (int it = 0; it < opt.max_iterations; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      qm[i] = 0.5 * (x.q[i] + next.q[i]);
      pm[i] = 0.5 * (x.p[i] + next.p[i]);
    }
    if (!domain.contains(std::sqrt(dot(qm, qm)))) return {true, true};
    const Gradient g = hamiltonian_gradient(params, qm, pm);
    double change = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double qn = x.q[i] + tau * g.dp[i];
      const double pn = x.p[i] - tau * g.dq[i];
      change = std::max({change, std::abs(qn - next.q[i]), std::abs(pn - next.p[i])});
      scale = std::max({scale, std::abs(qn), std::abs(pn)});
      next.q[i] = qn;
      next.p[i] = pn;
    }
    if (change <= opt.tolerance * (1.0 + scale)) {
      if (!domain.contains(radius(next))) return {true, true};
      x = std::move(next);
      return {};
    }
  }
  return {false, false};
}

InvariantDrift drift_between(const ModelParams& params, const InvariantSet& ref,
                             const InvariantSet& now) {
  InvariantDrift d;
  d.H = std::abs(now.H - ref.H) / (ref.H != 0.0 ? std::abs(ref.H) : 1.0);
  d.L2 = std::abs(now.L2 - ref.L2) / (ref.L2 > 0.0 ? ref.L2 : 1.0);
  const double r_scale = std::max(std::sqrt(dot(ref.R, ref.R)), std::abs(params.eta * ref.H + params.k));
  double dr = 0.0;
  for (std::size_t i = 0; i < ref.R.size(); ++i) dr = std::max(dr, std::abs(now.R[i] - ref.R[i]));
  d.R = dr / (r_scale > 0.0 ? r_scale : 1.0);
  return d;
}

std::vector<double> random_unit_vector(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> v(static_cast<std::size_t>(n));
  double norm2 = 0.0;
  while (norm2 < 1e-12) {
    for (double& c : v) c = gauss(rng);
    norm2 = dot(v, v);
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (double& c : v) c *= inv;
  return v;
}

}  // namespace

double radius(const PhasePoint& x) { return std::sqrt(dot(x.q, x.q)); }

void validate_point(const ModelParams& params, const PhasePoint& x) {
  params.validate();
  if (x.q.size() != static_cast<std::size_t>(params.N) || x.p.size() != x.q.size()) {
    throw BadParams("phase point dimension does not match N = " + std::to_string(params.N));
  }
  require_in_domain(params, radius(x), "phase point");
}

double hamiltonian(const ModelParams& params, const PhasePoint& x) {
  validate_point(params, x);
  const double r = radius(x);
  const double s = params.eta + r;
  return r * dot(x.p, x.p) / (2.0 * s) - params.k / s;
}

double radial_hamiltonian(const ModelParams& params, const RadialPhasePoint& st) {
  params.validate();
  require_in_domain(params, st.r, "radial_hamiltonian");
  if (st.L2 < 0.0) throw BadParams("radial_hamiltonian: L2 must be nonnegative");
  const double s = params.eta + st.r;
  return st.r / (2.0 * s) * (st.p_r * st.p_r + st.L2 / (st.r * st.r)) - params.k / s;
}

RadialPhasePoint to_radial(const ModelParams& params, const PhasePoint& x) {
  validate_point(params, x);
  const double r = radius(x);
  const double qp = dot(x.q, x.p);
  return {r, qp / r, std::max(0.0, r * r * dot(x.p, x.p) - qp * qp)};
}

double angular_momentum(const PhasePoint& x, int i, int j) {
  return x.q[static_cast<std::size_t>(i)] * x.p[static_cast<std::size_t>(j)] -
         x.q[static_cast<std::size_t>(j)] * x.p[static_cast<std::size_t>(i)];
}

std::vector<double> runge_lenz(const ModelParams& params, const PhasePoint& x) {
  const double H = hamiltonian(params, x);
  const double r = radius(x);
  const double qp = dot(x.q, x.p);
  const double p2 = dot(x.p, x.p);
  const double radial_term = (params.eta * H + params.k) / r;
  std::vector<double> R(x.q.size());
  for (std::size_t i = 0; i < R.size(); ++i) R[i] = x.p[i] * qp - x.q[i] * p2 + x.q[i] * radial_term;
  return R;
}

InvariantSet invariants(const ModelParams& params, const PhasePoint& x) {
  InvariantSet out;
  out.H = hamiltonian(params, x);
  const int N = params.N;
  for (int m = 2; m <= N; ++m) {
    out.C_up.push_back(block_casimir(x, 0, m));
    out.C_down.push_back(block_casimir(x, N - m, N));
  }
  const double qp = dot(x.q, x.p);
  out.L2 = dot(x.q, x.q) * dot(x.p, x.p) - qp * qp;
  // Both chains end at the full so(N) Casimir.
  out.C_up.back() = out.L2;
  out.C_down.back() = out.L2;
  out.R = runge_lenz(params, x);
  return out;
}

double functional_relation_residual(const ModelParams& params, const PhasePoint& x) {
  const InvariantSet inv = invariants(params, x);
  const double b = params.eta * inv.H + params.k;
  return dot(inv.R, inv.R) - 2.0 * inv.L2 * inv.H - b * b;
}

double poisson_bracket(const PhaseFunction& f, const PhaseFunction& g, const PhasePoint& x,
                       double h_rel) {
  return bracket_from_gradients(numeric_gradient(f, x, h_rel), numeric_gradient(g, x, h_rel));
}

double poisson_bracket(const ModelParams& params, const PhaseFunction& f, const PhaseFunction& g,
                       const PhasePoint& x, double h_rel) {
  validate_point(params, x);
  PhasePoint y = x;
  for (std::size_t i = 0; i < x.q.size(); ++i) {
    const double h = h_rel * (1.0 + std::abs(x.q[i]));
    for (double sign : {-1.0, 1.0}) {
      y.q[i] = x.q[i] + sign * h;
      require_in_domain(params, radius(y), "poisson_bracket stencil");
    }
    y.q[i] = x.q[i];
  }
  return poisson_bracket(f, g, x, h_rel);
}

VerificationReport so_algebra_check(const ModelParams& params, const PhasePoint& x,
                                    double tolerance) {
  const double H0 = hamiltonian(params, x);
  if (H0 >= 0.0) throw PositiveEnergy("so_algebra_check: requires H < 0, got H = " + std::to_string(H0));
  const int N = params.N;

  // J̃ with indices 0..N, where index 0 is the Runge–Lenz direction.
  auto J_tilde = [&params](int a, int b) -> PhaseFunction {
    if (a == 0) {
      return [&params, b](const PhasePoint& y) {
        const double H = hamiltonian(params, y);
        return runge_lenz(params, y)[static_cast<std::size_t>(b - 1)] / std::sqrt(-2.0 * H);
      };
    }
    return [a, b](const PhasePoint& y) { return angular_momentum(y, a - 1, b - 1); };
  };

  // Gradients are cached per generator so each bracket costs one contraction.
  std::vector<std::vector<std::vector<double>>> grad(
      static_cast<std::size_t>(N + 1), std::vector<std::vector<double>>(static_cast<std::size_t>(N + 1)));
  std::vector<std::vector<double>> value(static_cast<std::size_t>(N + 1),
                                         std::vector<double>(static_cast<std::size_t>(N + 1), 0.0));
  for (int a = 0; a <= N; ++a) {
    for (int b = a + 1; b <= N; ++b) {
      const PhaseFunction F = J_tilde(a, b);
      (void)poisson_bracket(params, F, F, x);  // domain check of the stencil
      grad[a][b] = numeric_gradient(F, x, 1e-5);
      value[a][b] = F(x);
    }
  }
  auto br = [&grad](int a, int b, int c, int d) { return bracket_from_gradients(grad[a][b], grad[c][d]); };

  double so_dev = 0.0;
  for (int i = 0; i <= N; ++i) {
    for (int j = i + 1; j <= N; ++j) {
      for (int k = j + 1; k <= N; ++k) {
        so_dev = std::max(so_dev, std::abs(br(i, j, i, k) - value[j][k]));
        so_dev = std::max(so_dev, std::abs(br(i, j, j, k) + value[i][k]));
        so_dev = std::max(so_dev, std::abs(br(i, k, j, k) - value[i][j]));
      }
    }
  }

  const std::vector<double> R = runge_lenz(params, x);
  std::vector<std::vector<double>> gradR(static_cast<std::size_t>(N));
  for (int i = 0; i < N; ++i) {
    gradR[i] = numeric_gradient(
        [&params, i](const PhasePoint& y) { return runge_lenz(params, y)[static_cast<std::size_t>(i)]; }, x,
        1e-5);
  }
  const std::vector<double> gradH =
      numeric_gradient([&params](const PhasePoint& y) { return hamiltonian(params, y); }, x, 1e-5);

  double rr_dev = 0.0;
  double jr_dev = 0.0;
  double conservation = 0.0;
  for (int i = 0; i < N; ++i) {
    conservation = std::max(conservation, std::abs(bracket_from_gradients(gradH, gradR[i])));
    for (int j = 0; j < N; ++j) {
      if (j > i) {
        const double expected = -2.0 * H0 * angular_momentum(x, i, j);
        rr_dev = std::max(rr_dev, std::abs(bracket_from_gradients(gradR[i], gradR[j]) - expected));
        conservation = std::max(conservation, std::abs(bracket_from_gradients(gradH, grad[i + 1][j + 1])));
        for (int k = 0; k < N; ++k) {
          const double expected_jr = (i == k ? R[j] : 0.0) - (j == k ? R[i] : 0.0);
          jr_dev = std::max(jr_dev,
                            std::abs(bracket_from_gradients(grad[i + 1][j + 1], gradR[k]) - expected_jr));
        }
      }
    }
  }

  const InvariantSet inv = invariants(params, x);
  const double b = params.eta * H0 + params.k;
  double casimir = inv.L2;
  for (double r : R) casimir += r * r / (-2.0 * H0);
  const double casimir_expected = -b * b / (2.0 * H0);

  VerificationReport report;
  report.add("so(N+1) brackets", so_dev, tolerance);
  report.add("{R_i,R_j}+2H J_ij", rr_dev, tolerance);
  report.add("{J_ij,R_k} vector rule", jr_dev, tolerance);
  report.add("{H,J_ij} and {H,R_i}", conservation, tolerance);
  report.add("so(N+1) Casimir", (casimir - casimir_expected) / (1.0 + std::abs(casimir_expected)), 1e-10);
  return report;
}

double flattened_coordinate(const ModelParams& params, double r) {
  params.validate();
  require_in_domain(params, r, "flattened_coordinate");
  const double eta = params.eta;
  if (eta == 0.0) return r;
  return std::sqrt(r * (eta + r)) + eta * std::log(std::sqrt(r) + std::sqrt(eta + r));
}

double radius_from_flattened(const ModelParams& params, double Q) {
  params.validate();
  const double eta = params.eta;
  if (eta == 0.0) {
    if (!(Q > 0.0)) throw DomainError("radius_from_flattened: Q must be positive for eta = 0");
    return Q;
  }
  const double lower = radial_domain(params).lower;
  // Limit of Q at the lower end of the domain, η ln√|η| for either sign.
  const double Q_lower = 0.5 * eta * std::log(std::abs(eta));
  if (!(Q > Q_lower)) throw DomainError("radius_from_flattened: Q below the image of the domain");

  double lo = lower;
  double hi = std::max(2.0 * lower, 1.0);
  while (flattened_coordinate(params, hi) < Q) {
    lo = hi;
    hi *= 2.0;
  }
  // Newton on Q(r) − Q with dQ/dr = f(r); steps leaving (lo, hi) fall back to bisection.
  double r = 0.5 * (lo + hi);
  const double tol = 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(Q));
  for (int it = 0; it < 200; ++it) {
    const double residual = flattened_coordinate(params, r) - Q;
    if (std::abs(residual) <= tol) return r;
    (residual > 0.0 ? hi : lo) = r;
    const double newton = r - residual / std::sqrt(1.0 + eta / r);
    r = (newton > lo && newton < hi) ? newton : 0.5 * (lo + hi);
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) return r;
  }
  throw ConvergenceFailure("radius_from_flattened: inversion did not converge");
}

CanonicalPair canonical_QP(const ModelParams& params, double r, double p_r) {
  const double Q = flattened_coordinate(params, r);
  return {Q, std::sqrt(r / (params.eta + r)) * p_r};
}

double classical_effective_potential(const ModelParams& params, double L2, double r) {
  params.validate();
  require_in_domain(params, r, "classical_effective_potential");
  if (L2 < 0.0) throw BadParams("classical_effective_potential: L2 must be nonnegative");
  const double s = params.eta + r;
  return L2 / (2.0 * r * s) - params.k / s;
}

TaubNutMapping taub_nut_map(const TaubNutParams& tn) {
  if (!(tn.m > 0.0)) throw BadParams("taub_nut_map: m must be positive");
  const double mu2 = tn.mu * tn.mu;
  ModelParams params;
  params.N = 3;
  params.eta = 4.0 * tn.m;
  params.k = -mu2 / (8.0 * tn.m);
  params.hbar = 1.0;
  return {params, mu2 / (2.0 * params.eta * params.eta), mu2};
}

double taub_nut_hamiltonian(const TaubNutParams& tn, const PhasePoint& x) {
  if (!(tn.m > 0.0)) throw BadParams("taub_nut_hamiltonian: m must be positive");
  if (x.q.size() != 3 || x.p.size() != 3) throw BadParams("taub_nut_hamiltonian: phase point must be 3D");
  const double r = radius(x);
  if (!(r > 0.0)) throw DomainError("taub_nut_hamiltonian: |q| must be positive");
  const double g = 1.0 + 4.0 * tn.m / r;
  const double four_m = 4.0 * tn.m;
  return dot(x.p, x.p) / (2.0 * g) + tn.mu * tn.mu * g / (2.0 * four_m * four_m);
}

std::vector<double> independence_singular_values(const ModelParams& params, const PhasePoint& x,
                                                 int runge_lenz_index) {
  validate_point(params, x);
  const int N = params.N;
  if (runge_lenz_index < 0 || runge_lenz_index >= N) throw BadParams("runge_lenz_index out of range");

  std::vector<PhaseFunction> fns;
  fns.emplace_back([&params](const PhasePoint& y) { return hamiltonian(params, y); });
  for (int m = 2; m <= N; ++m) {
    fns.emplace_back([m](const PhasePoint& y) { return block_casimir(y, 0, m); });
  }
  for (int m = 2; m < N; ++m) {
    fns.emplace_back([m, N](const PhasePoint& y) { return block_casimir(y, N - m, N); });
  }
  fns.emplace_back([&params, runge_lenz_index](const PhasePoint& y) {
    return runge_lenz(params, y)[static_cast<std::size_t>(runge_lenz_index)];
  });

  Eigen::MatrixXd G(static_cast<Eigen::Index>(fns.size()), 2 * N);
  for (std::size_t row = 0; row < fns.size(); ++row) {
    const std::vector<double> g = numeric_gradient(fns[row], x, 1e-6);
    for (int c = 0; c < 2 * N; ++c) G(static_cast<Eigen::Index>(row), c) = g[static_cast<std::size_t>(c)];
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(G);
  const Eigen::VectorXd s = svd.singularValues();
  return std::vector<double>(s.data(), s.data() + s.size());
}

Trajectory integrate_orbit(const ModelParams& params, const PhasePoint& x0, double dt, long steps,
                           long sample_every, const IntegratorOptions& options) {
  validate_point(params, x0);
  if (!(dt > 0.0) || steps < 0 || sample_every < 1) {
    throw BadParams("integrate_orbit: need dt > 0, steps >= 0, sample_every >= 1");
  }
  static const double gamma1 = 1.0 / (2.0 - std::cbrt(2.0));
  static const double gamma2 = 1.0 - 2.0 * gamma1;

  Trajectory traj;
  traj.initial = invariants(params, x0);
  traj.bound = traj.initial.H < 0.0;
  traj.times.push_back(0.0);
  traj.points.push_back(x0);
  traj.drifts.push_back({});

  PhasePoint x = x0;
  for (long step = 1; step <= steps; ++step) {
    const PhasePoint before = x;
    const double t_before = (step - 1) * dt;
    auto stage = [&](double tau) {
      const StepFailure status = midpoint_step(params, x, tau, options);
      if (status.left_domain) {
        std::ostringstream os;
        os.precision(17);
        os << "orbit left the radial domain near t = " << t_before;
        throw DomainBreach(os.str(), before, t_before);
      }
      if (!status.converged) {
        throw ConvergenceFailure("implicit midpoint iteration did not converge at t = " +
                                 std::to_string(t_before));
      }
    };
    if (options.scheme == Scheme::triple_jump) {
      stage(gamma1 * dt);
      stage(gamma2 * dt);
      stage(gamma1 * dt);
    } else {
      stage(dt);
    }

    const InvariantDrift d = drift_between(params, traj.initial, invariants(params, x));
    traj.max_drift.H = std::max(traj.max_drift.H, d.H);
    traj.max_drift.L2 = std::max(traj.max_drift.L2, d.L2);
    traj.max_drift.R = std::max(traj.max_drift.R, d.R);
    if (step % sample_every == 0 || step == steps) {
      traj.times.push_back(step * dt);
      traj.points.push_back(x);
      traj.drifts.push_back(d);
    }
  }
  return traj;
}

PhasePoint random_bound_point(const ModelParams& params, std::mt19937_64& rng) {
  params.validate();
  if (!(params.k > 0.0)) throw NonAttractive("random_bound_point: requires k > 0");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double lower = radial_domain(params).lower;
  const double r = lower + 0.3 + 2.0 * unit(rng);
  const double V = -params.k / (params.eta + r);
  const double T = (0.05 + 0.65 * unit(rng)) * std::abs(V);
  const double pmag = std::sqrt(2.0 * (params.eta + r) * T / r);

  PhasePoint x;
  x.q = random_unit_vector(params.N, rng);
  x.p = random_unit_vector(params.N, rng);
  for (double& c : x.q) c *= r;
  for (double& c : x.p) c *= pmag;
  return x;
}

PhasePoint random_orbit_point(const ModelParams& params, std::mt19937_64& rng) {
  params.validate();
  if (!(params.k > 0.0)) throw NonAttractive("random_orbit_point: requires k > 0");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double lower = radial_domain(params).lower;
  // For η < 0 the potential is singular at the wall; 𝐋² ≥ 2r·0.3k > 2k|η| keeps
  // the centrifugal term dominant there.
  const double scale = params.eta < 0.0 ? std::max(1.0, -10.0 * params.eta) : 1.0;
  const double r = lower + (0.5 + 1.5 * unit(rng)) * scale;
  const double V = -params.k / (params.eta + r);
  const double T = (0.3 + 0.4 * unit(rng)) * std::abs(V);
  const double pmag = std::sqrt(2.0 * (params.eta + r) * T / r);

  PhasePoint x;
  x.q = random_unit_vector(params.N, rng);
  // Gram-Schmidt against q; a second draw handles the measure-zero parallel case.
  std::vector<double> t;
  double norm = 0.0;
  while (!(norm > 1e-6)) {
    t = random_unit_vector(params.N, rng);
    const double c = dot(t, x.q);
    for (std::size_t i = 0; i < t.size(); ++i) t[i] -= c * x.q[i];
    norm = std::sqrt(dot(t, t));
  }
  x.p = t;
  for (double& c : x.q) c *= r;
  for (double& c : x.p) c *= pmag / norm;
  return x;
}

PhasePoint random_phase_point(const ModelParams& params, std::mt19937_64& rng) {
  params.validate();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double lower = radial_domain(params).lower;
  const double r = lower + 0.1 + 3.0 * unit(rng);
  PhasePoint x;
  x.q = random_unit_vector(params.N, rng);
  x.p = random_unit_vector(params.N, rng);
  const double pmag = 2.0 * unit(rng);
  for (double& c : x.q) c *= r;
  for (double& c : x.p) c *= pmag;
  return x;
}

}  // namespace taubnut::classical
