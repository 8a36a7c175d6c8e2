#include "taubnut/cli/verify.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "taubnut/classical.hpp"
#include "taubnut/cli/output.hpp"
#include "taubnut/cli/parallel.hpp"
#include "taubnut/errors.hpp"
#include "taubnut/geometry.hpp"
#include "taubnut/radial_solver.hpp"
#include "taubnut/spectrum.hpp"

namespace taubnut::cli {
namespace {

// Keeps the worst residual per check name across repeated evaluations.
class MaxTracker {
 public:
  void observe(const std::string& name, double residual, double tolerance) {
    auto [it, inserted] = entries_.try_emplace(name, Entry{residual, tolerance, order_.size()});
    if (inserted) {
      order_.push_back(name);
    } else if (std::isnan(residual) || residual > it->second.residual) {
      it->second.residual = residual;
    }
  }
  void flush(VerificationReport& report, const std::string& prefix) const {
    for (const auto& name : order_) {
      const Entry& e = entries_.at(name);
      report.add(prefix + name, e.residual, e.tolerance);
    }
  }

 private:
  struct Entry {
    double residual;
    double tolerance;
    std::size_t index;
  };
  std::map<std::string, Entry> entries_;
  std::vector<std::string> order_;
};

std::vector<double> log_grid(double lower, double scale, int count) {
  // Offsets from the domain end, 1e−3·scale to 1e2·scale.
  std::vector<double> rs;
  for (int i = 0; i < count; ++i) rs.push_back(lower + scale * std::pow(10.0, -3.0 + 5.0 * i / (count - 1)));
  return rs;
}

void classical_checks(const ModelParams& p, int samples, std::mt19937_64& rng, VerificationReport& report) {
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const auto x = classical::random_phase_point(p, rng);
    const auto inv = classical::invariants(p, x);
    double R2 = 0.0;
    for (double v : inv.R) R2 += v * v;
    const double b = p.eta * inv.H + p.k;
    const double scale = R2 + std::abs(2.0 * inv.L2 * inv.H) + b * b;
    worst = std::max(worst, std::abs(classical::functional_relation_residual(p, x)) / scale);
  }
  report.add("functional relation R^2 = 2L^2H + (etaH+k)^2 (relative)", worst, 1e-10);

  if (p.k > 0.0) {
    MaxTracker algebra;
    const int points = std::min(samples, 100);
    for (int i = 0; i < points; ++i) {
      const auto x = classical::random_bound_point(p, rng);
      for (const auto& c : classical::so_algebra_check(p, x).checks) algebra.observe(c.name, c.max_residual, c.tolerance);
    }
    algebra.flush(report, "");
  }

  // {Q, P} in the reduced (r, p_r) plane.
  const double lower = radial_domain(p).lower;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double qp = 0.0, inversion = 0.0;
  const classical::PhaseFunction Q = [&](const classical::PhasePoint& y) {
    return classical::canonical_QP(p, y.q[0], y.p[0]).Q;
  };
  const classical::PhaseFunction P = [&](const classical::PhasePoint& y) {
    return classical::canonical_QP(p, y.q[0], y.p[0]).P;
  };
  for (int i = 0; i < 100; ++i) {
    const double r = lower + 0.05 + 4.0 * unit(rng);
    const classical::PhasePoint y{{r}, {2.0 * unit(rng) - 1.0}};
    qp = std::max(qp, std::abs(classical::poisson_bracket(Q, P, y) - 1.0));
    const double back = classical::radius_from_flattened(p, classical::flattened_coordinate(p, r));
    inversion = std::max(inversion, std::abs(back - r) / r);
  }
  report.add("{Q,P} = 1", qp, 1e-8);
  report.add("r(Q(r)) = r (relative)", inversion, 1e-12);

  if (p.k > 0.0) {
    const auto x0 = classical::random_orbit_point(p, rng);
    const auto traj = classical::integrate_orbit(p, x0, 1e-3, 10000, 100);
    report.add("orbit drift H (triple-jump midpoint, 1e4 steps)", traj.max_drift.H, 1e-8);
    report.add("orbit drift L^2", traj.max_drift.L2, 1e-8);
    report.add("orbit drift Runge-Lenz", traj.max_drift.R, 1e-8);
  }
}

void geometry_checks(const ModelParams& p, VerificationReport& report) {
  const double lower = radial_domain(p).lower;
  const double scale = p.eta < 0.0 ? -p.eta : 1.0;
  double curv = 0.0, embed = 0.0;
  for (double r : log_grid(lower, scale, 61)) {
    const double mag = geometry::scalar_curvature_magnitude(p, r);
    const double diff = std::abs(geometry::scalar_curvature(p, r) - geometry::scalar_curvature_numeric(p, r));
    curv = std::max(curv, mag > 0.0 ? diff / mag : diff);
    if (p.eta > 0.0) embed = std::max(embed, std::abs(geometry::embedding_metric_residual(p, r)));
  }
  report.add("scalar curvature vs finite-difference Ricci scalar", curv, 1e-6);
  if (p.eta > 0.0) report.add("embedding induced metric", embed, 1e-10);
}

void spectrum_checks(const ModelParams& p, int M, VerificationReport& report) {
  const double h2 = p.hbar * p.hbar;
  double casimir = 0.0, quadratic = 0.0, deg = 0.0, alpha = 0.0;
  for (int frak = 0; frak <= 10; ++frak) {
    const double s = spectrum::principal_s(p, frak);
    const double E0 = spectrum::energy(p, frak, 0).E;
    for (int l = 0; l <= frak; ++l) {
      const auto level = spectrum::energy(p, frak - l, l);
      casimir = std::max(casimir, std::abs(spectrum::casimir_relation_residual(p, level)) / (h2 * s * s));
      quadratic = std::max(quadratic, std::abs(spectrum::quadratic_residual(p, level)) / (p.k * p.k));
      deg = std::max(deg, std::abs(level.E - E0));
      alpha = std::max(alpha, std::abs(spectrum::kummer_alpha(p, l, level.E) - (frak - l)));
    }
  }
  report.add("Casimir -(etaE+k)^2/(2E) = hbar^2 s^2", casimir, 1e-12);
  report.add("quadratic for E", quadratic, 1e-12);
  report.add_flag("E depends only on n+l (exact)", deg == 0.0, deg, 0.0);
  report.add("Kummer alpha equals n on the spectrum", alpha, 1e-10);

  radial::SolverOptions options;
  options.M = M;
  options.vectors = false;
  double oracle = 0.0, conformal = 0.0, direct = 0.0;
  for (int l = 0; l <= 2; ++l) {
    const auto set = radial::solve_bound_states(p, l, 3 - l, options);
    for (int n = 0; n + l <= 2; ++n) {
      const auto level = spectrum::energy(p, n, l);
      oracle = std::max(oracle, std::abs(set.energies[static_cast<std::size_t>(n)] - level.E) / std::abs(level.E));
      conformal = std::max(conformal, radial::conformal_residual(p, level, set.grid));
      direct = std::max(direct, radial::direct_residual(p, level, set.grid));
    }
  }
  report.add("finite-difference oracle vs closed form (n+l <= 2)", oracle, 1e-6);
  report.add("conformal-gauge radial residual", conformal, 1e-6);
  report.add("direct-gauge radial residual", direct, 1e-6);

  double gauge = 0.0;
  const double lower = radial_domain(p).lower;
  for (int frak = 0; frak <= 2; ++frak) {
    const auto level = spectrum::energy(p, frak, 0);
    for (double r : log_grid(lower, 1.0, 21)) {
      const double d = spectrum::eigenfunction_radial(p, level, spectrum::Gauge::direct, r);
      const double c = spectrum::eigenfunction_radial(p, level, spectrum::Gauge::conformal, r);
      const double converted = std::pow(1.0 + p.eta / r, 0.25 * (p.N - 2)) * c;
      if (d != 0.0) gauge = std::max(gauge, std::abs(converted - d) / std::abs(d));
    }
  }
  report.add("gauge conversion pointwise", gauge, 1e-10);

  for (auto g : {spectrum::Gauge::direct, spectrum::Gauge::conformal}) {
    double worst = 0.0;
    for (int l = 0; l <= 1; ++l) {
      const Eigen::MatrixXd G = radial::orthogonality_matrix(p, l, {0, 1, 2}, g);
      worst = std::max(worst, (G - Eigen::MatrixXd::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff());
    }
    report.add(std::string("Gram matrix identity (") + (g == spectrum::Gauge::direct ? "direct" : "conformal") + ")",
               worst, 1e-8);
  }
}

void negative_eta_checks(const ModelParams& p, int M, VerificationReport& report) {
  radial::SolverOptions options;
  options.M = M;
  options.vectors = false;
  double worst = 0.0;
  for (int l = 0; l <= 1; ++l) {
    worst = std::max(worst, radial::dirichlet_spectrum_negative_eta(p, l, {}, 3, options).max_rel_diff);
  }
  report.add("Tricomi roots vs Dirichlet finite differences", worst, 1e-5);
}

void no_bound_state_check(const ModelParams& p, int M, VerificationReport& report, const std::string& name) {
  radial::SolverOptions options;
  options.M = M;
  options.vectors = false;
  bool raised = false;
  try {
    (void)radial::solve_bound_states(p, 0, 1, options);
  } catch (const NoBoundStates&) {
    raised = true;
  }
  report.add_flag(name, raised);
}

VerificationReport verify_eta(const ModelParams& p, const RunConfig& config, std::uint64_t stream) {
  VerificationReport report;
  std::seed_seq seq{config.seed, stream};
  std::mt19937_64 rng(seq);
  classical_checks(p, config.samples, rng, report);
  geometry_checks(p, report);
  if (p.k > 0.0 && p.eta >= 0.0) {
    spectrum_checks(p, config.M, report);
  } else if (p.k > 0.0) {
    negative_eta_checks(p, config.M, report);
  } else {
    no_bound_state_check(p, config.M, report, "no bound states for k <= 0");
  }
  return report;
}

// One-sided Richardson table for the first two η-derivatives at η = 0.
std::pair<double, double> measured_series(const ModelParams& base, bool flipped) {
  constexpr int levels = 4;
  const double h0 = 0.02;
  auto E = [&](double eta) {
    ModelParams p = base;
    p.eta = eta;
    if (eta == 0.0) return spectrum::coulomb_energy(p, 0, 0);
    return spectrum::energy(p, 0, 0, flipped ? spectrum::Branch::flipped : spectrum::Branch::physical).E;
  };
  const double E0 = E(0.0);
  double d1[levels][levels], d2[levels][levels];
  for (int j = 0; j < levels; ++j) {
    const double h = h0 / std::pow(2.0, j);
    d1[j][0] = (E(h) - E0) / h;
    d2[j][0] = (E(2.0 * h) - 2.0 * E(h) + E0) / (2.0 * h * h);
  }
  for (int m = 1; m < levels; ++m) {
    const double w = std::pow(2.0, m);
    for (int j = m; j < levels; ++j) {
      d1[j][m] = (w * d1[j][m - 1] - d1[j - 1][m - 1]) / (w - 1.0);
      d2[j][m] = (w * d2[j][m - 1] - d2[j - 1][m - 1]) / (w - 1.0);
    }
  }
  return {d1[levels - 1][levels - 1], d2[levels - 1][levels - 1]};
}

void global_checks(const RunConfig& config, VerificationReport& report) {
  ModelParams p = config.params;
  if (!(p.k > 0.0)) p.k = 1.0;

  // The branch rule: the physical root must reduce to the Coulomb ladder.
  ModelParams flat = p;
  flat.eta = 1e-8;
  const auto branch = config.perturb_sign ? spectrum::Branch::flipped : spectrum::Branch::physical;
  double worst = 0.0;
  for (int frak = 0; frak <= 4; ++frak) {
    for (int l = 0; l <= frak; ++l) {
      const double E = spectrum::energy(flat, frak - l, l, branch).E;
      const double E_coulomb = spectrum::coulomb_energy(flat, frak - l, l);
      worst = std::max(worst, std::abs(E - E_coulomb) / std::abs(E_coulomb));
    }
  }
  report.add("flat limit eta=1e-8 reproduces -k^2/(2hbar^2 s^2)", worst, 1e-7);

  const auto [c1, c2] = measured_series(p, config.perturb_sign);
  ModelParams at0 = p;
  at0.eta = 0.0;
  const auto series = spectrum::energy_series(at0, 0, 0);
  report.add("eta-expansion first coefficient (relative)", std::abs(c1 - series.c1) / std::abs(series.c1), 1e-4);
  report.add("eta-expansion second coefficient (relative)", std::abs(c2 - series.c2) / std::abs(series.c2), 1e-4);

  ModelParams repulsive = p;
  repulsive.k = -std::abs(p.k);
  repulsive.eta = std::max(0.0, config.etas.front());
  no_bound_state_check(repulsive, config.M, report, "repulsive sector k<0 has no bound states");
}

}  // namespace

VerificationReport run_verification(const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<double> etas = config.eta_given ? config.etas : std::vector<double>{0.0, 0.2, 1.0};

  // Task 0 holds the parameter-independent checks.
  const auto parts = parallel_map<VerificationReport>(etas.size() + 1, config.jobs, [&](std::size_t i) {
    VerificationReport r;
    if (i == 0) {
      global_checks(config, r);
      return r;
    }
    ModelParams p = config.params;
    p.eta = etas[i - 1];
    p.validate();
    return verify_eta(p, config, i);
  });

  VerificationReport report;
  report.merge(parts[0]);
  for (std::size_t i = 0; i < etas.size(); ++i) report.merge(parts[i + 1], "eta=" + format_number(etas[i]) + ": ");
  report.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::string report_to_json(const VerificationReport& report, const RunConfig& config) {
  using nlohmann::ordered_json;
  ordered_json cfg;
  cfg["command"] = to_string(config.command);
  cfg["N"] = config.params.N;
  cfg["k"] = config.params.k;
  cfg["hbar"] = config.params.hbar;
  cfg["eta"] = config.eta_given ? config.etas : std::vector<double>{0.0, 0.2, 1.0};
  cfg["seed"] = config.seed;
  cfg["samples"] = config.samples;
  cfg["M"] = config.M;
  cfg["perturb_sign"] = config.perturb_sign;

  ordered_json checks = ordered_json::array();
  for (const auto& c : report.checks) {
    ordered_json j;
    j["name"] = c.name;
    j["max_residual"] = c.max_residual;
    j["tolerance"] = c.tolerance;
    j["pass"] = c.passed;
    checks.push_back(std::move(j));
  }
  ordered_json out;
  out["schema_version"] = kReportSchemaVersion;
  out["config"] = std::move(cfg);
  out["checks"] = std::move(checks);
  out["pass"] = report.passed();
  out["runtime_s"] = report.runtime_s;
  return out.dump(2);
}

}  // namespace taubnut::cli
