#include "taubnut/radial_solver.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "taubnut/classical.hpp"
#include "taubnut/special_functions.hpp"
#include "taubnut/tridiagonal.hpp"

namespace taubnut::radial {
namespace {

constexpr int kMinNodes = 1024;
constexpr int kMaxNodes = 1 << 20;

void check_node_count(int M) {
  if (M < kMinNodes || M > kMaxNodes) {
    throw BadParams("grid size M = " + std::to_string(M) + " outside [1024, 2^20]");
  }
}

void check_level_request(int l, int count) {
  if (l < 0) throw BadParams("l must be nonnegative");
  if (count < 1) throw BadParams("count must be positive");
}

// Decay rate estimate for the level with principal label frak_n, used only to size grids.
double decay_estimate(const ModelParams& params, int frak_n) {
  const double s = spectrum::principal_s(params, frak_n);
  const double h2 = params.hbar * params.hbar;
  if (!(params.k > 0.0)) return 1.0 / std::max(std::abs(params.eta), std::sqrt(h2));
  const double kappa0 = params.k / (h2 * s);
  return kappa0 / (1.0 + std::max(params.eta, 0.0) * params.k / (h2 * s * s));
}

struct Discretization {
  tridiagonal::SymmetricTridiagonal T;
  std::vector<double> inv_sqrt_w;  // maps symmetric eigenvectors back to χ
  RadialGrid grid;
};

// Flux form for χ = Φ/r^l, see solve_bound_states.
Discretization discretize_flux(const ModelParams& params, int l, double r_max, int M) {
  const double eta = params.eta;
  const double h2 = params.hbar * params.hbar;
  const int D = 2 * l + params.N;
  const double lower = radial_domain(params).lower;

  Discretization out;
  RadialGrid& g = out.grid;
  g.M = M;
  g.r_max = r_max;
  g.r_nodes.resize(static_cast<std::size_t>(M));
  double h = 0.0;
  if (eta >= 0.0) {
    g.kind = GridKind::r_cell_centered;
    h = r_max / M;
    for (int i = 0; i < M; ++i) g.r_nodes[static_cast<std::size_t>(i)] = (i + 0.5) * h;
  } else {
    g.kind = GridKind::r_vertex;
    h = (r_max - lower) / (M + 1);
    for (int i = 0; i < M; ++i) g.r_nodes[static_cast<std::size_t>(i)] = lower + (i + 1) * h;
  }
  g.spacing = h;

  auto face_weight = [D](double r) { return std::pow(r, D - 1); };
  out.T.diag.resize(static_cast<std::size_t>(M));
  out.T.off.resize(static_cast<std::size_t>(M - 1));
  out.inv_sqrt_w.resize(static_cast<std::size_t>(M));
  std::vector<double> right_face(static_cast<std::size_t>(M));
  for (int i = 0; i < M; ++i) {
    const double r = g.r_nodes[static_cast<std::size_t>(i)];
    const double left = (eta >= 0.0 && i == 0) ? 0.0 : face_weight(r - 0.5 * h);
    right_face[static_cast<std::size_t>(i)] = face_weight(r + 0.5 * h);
    const double rD2 = std::pow(r, D - 2);
    const double w = 2.0 * rD2 * (r + eta);
    const double a = h2 * (left + right_face[static_cast<std::size_t>(i)]) / (h * h) - 2.0 * params.k * rD2;
    out.inv_sqrt_w[static_cast<std::size_t>(i)] = 1.0 / std::sqrt(w);
    out.T.diag[static_cast<std::size_t>(i)] = a / w;
  }
  for (int i = 0; i + 1 < M; ++i) {
    const double off = -h2 * right_face[static_cast<std::size_t>(i)] / (h * h);
    out.T.off[static_cast<std::size_t>(i)] =
        off * out.inv_sqrt_w[static_cast<std::size_t>(i)] * out.inv_sqrt_w[static_cast<std::size_t>(i + 1)];
  }

  g.Q_nodes.resize(static_cast<std::size_t>(M));
  for (int i = 0; i < M; ++i) {
    g.Q_nodes[static_cast<std::size_t>(i)] = classical::flattened_coordinate(params, g.r_nodes[static_cast<std::size_t>(i)]);
  }
  g.Q_lower = eta > 0.0 ? 0.5 * eta * std::log(eta) : (eta < 0.0 ? 0.5 * eta * std::log(-eta) : 0.0);
  g.Q_max = classical::flattened_coordinate(params, r_max);
  return out;
}

Discretization discretize_q(const ModelParams& params, int l, double E_scale, int M, double epsilon) {
  Discretization out;
  out.grid = build_grid(params, E_scale, M, epsilon);
  const RadialGrid& g = out.grid;
  const double h = g.spacing;
  const double kinetic = params.hbar * params.hbar / (2.0 * h * h);
  out.T.diag.resize(static_cast<std::size_t>(M));
  out.T.off.assign(static_cast<std::size_t>(M - 1), -kinetic);
  out.inv_sqrt_w.assign(static_cast<std::size_t>(M), 1.0);
  for (int i = 0; i < M; ++i) {
    out.T.diag[static_cast<std::size_t>(i)] =
        2.0 * kinetic + spectrum::quantum_effective_potential(params, l, g.r_nodes[static_cast<std::size_t>(i)]);
  }
  return out;
}

std::vector<double> lowest_bound_levels(const tridiagonal::SymmetricTridiagonal& T, int count) {
  const int negative = tridiagonal::sturm_count(T, 0.0);
  if (negative == 0) throw NoBoundStates("discrete operator has no negative eigenvalue");
  if (negative < count) {
    throw NoBoundStates("only " + std::to_string(negative) + " bound states resolved, " +
                        std::to_string(count) + " requested");
  }
  return tridiagonal::lowest_eigenvalues(T, count, 0.0, 0.0);
}

void fill_richardson(BoundStateSet& set) {
  const std::size_t n = set.coarse.size();
  set.energies.resize(n);
  set.error_estimates.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    set.energies[i] = (4.0 * set.fine[i] - set.coarse[i]) / 3.0;
    set.error_estimates[i] = std::abs(set.fine[i] - set.coarse[i]) / 3.0;
  }
}

// Largest |Φ| over the outer 10% of the grid relative to the global maximum.
double tail_ratio(const Discretization& d, const std::vector<double>& y, int l) {
  double peak = 0.0;
  double tail = 0.0;
  const std::size_t M = y.size();
  const std::size_t start = M - M / 10;
  for (std::size_t i = 0; i < M; ++i) {
    const double phi = std::abs(y[i] * d.inv_sqrt_w[i]) * std::pow(d.grid.r_nodes[i], l);
    peak = std::max(peak, phi);
    if (i >= start) tail = std::max(tail, phi);
  }
  return peak > 0.0 ? tail / peak : 0.0;
}

struct StencilValues {
  double value;
  double d1;
  double d2;
};

template <class F>
StencilValues five_point(F&& f, double r) {
  const double h = 1e-3 * r;
  const double fm2 = f(r - 2.0 * h);
  const double fm1 = f(r - h);
  const double f0 = f(r);
  const double fp1 = f(r + h);
  const double fp2 = f(r + 2.0 * h);
  return {f0, (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h),
          (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h)};
}

void require_closed_form_sector(const ModelParams& params, const char* where) {
  if (params.eta < 0.0 || !(params.k > 0.0)) {
    throw SectorError(std::string(where) + ": needs eta >= 0 and k > 0");
  }
}

template <class Apply>
double weighted_residual(const ModelParams& params, const RadialGrid& grid, double weight_power, Apply&& apply) {
  double num = 0.0;
  double den = 0.0;
  for (double r : grid.r_nodes) {
    const double w = std::pow(r, params.N - 1) * std::pow(1.0 + params.eta / r, weight_power);
    const auto [phi, res] = apply(r);
    num += res * res * w;
    den += phi * phi * w;
  }
  if (!(den > 0.0)) throw IntegrationFailure("residual: eigenfunction vanishes on the grid");
  return std::sqrt(num / den);
}

}  // namespace

double lower_truncation(const ModelParams& params) {
  const double scale = params.k != 0.0 ? params.hbar * params.hbar / std::abs(params.k) : std::max(std::abs(params.eta), 1.0);
  return 1e-6 * scale;
}

RadialGrid build_grid(const ModelParams& params, double E_scale, int M, double epsilon) {
  params.validate();
  check_node_count(M);
  if (!(E_scale < 0.0) || !std::isfinite(E_scale)) throw BadParams("build_grid: E_scale must be negative");
  if (epsilon < 0.0) epsilon = lower_truncation(params);

  RadialGrid g;
  g.kind = GridKind::q_uniform;
  g.M = M;
  const double r_lower = radial_domain(params).lower + epsilon;
  g.Q_lower = classical::flattened_coordinate(params, r_lower);
  g.Q_max = g.Q_lower + 14.0 * std::log(10.0) * params.hbar / std::sqrt(-2.0 * E_scale);
  g.spacing = (g.Q_max - g.Q_lower) / (M + 1);
  g.Q_nodes.resize(static_cast<std::size_t>(M));
  g.r_nodes.resize(static_cast<std::size_t>(M));
  for (int i = 0; i < M; ++i) {
    const double Q = g.Q_lower + (i + 1) * g.spacing;
    g.Q_nodes[static_cast<std::size_t>(i)] = Q;
    g.r_nodes[static_cast<std::size_t>(i)] = classical::radius_from_flattened(params, Q);
  }
  g.r_max = classical::radius_from_flattened(params, g.Q_max);
  return g;
}

BoundStateSet solve_bound_states(const ModelParams& params, int l, int count, const SolverOptions& options) {
  params.validate();
  check_level_request(l, count);
  check_node_count(options.M);
  check_node_count(2 * options.M);

  const int top = count - 1 + l;
  const double lower = radial_domain(params).lower;
  double r_max = options.r_max;
  const bool automatic = r_max <= 0.0;
  if (automatic) r_max = lower + (36.0 + 4.0 * top) / decay_estimate(params, top);
  if (!(r_max > lower)) throw BadParams("solve_bound_states: r_max must exceed the domain lower bound");

  for (int attempt = 0;; ++attempt) {
    BoundStateSet set;
    set.l = l;
    const Discretization coarse = discretize_flux(params, l, r_max, options.M);
    set.coarse = lowest_bound_levels(coarse.T, count);
    Discretization fine = discretize_flux(params, l, r_max, 2 * options.M);
    set.fine = lowest_bound_levels(fine.T, count);
    fill_richardson(set);

    const std::vector<double> top_vector = tridiagonal::eigenvector(fine.T, set.fine.back());
    if (automatic && attempt < 3 && tail_ratio(fine, top_vector, l) > 1e-10) {
      r_max = lower + 2.0 * (r_max - lower);
      continue;
    }
    if (options.vectors) {
      for (int i = 0; i + 1 < count; ++i) set.vectors.push_back(tridiagonal::eigenvector(fine.T, set.fine[i]));
      set.vectors.push_back(top_vector);
    }
    set.grid = std::move(fine.grid);
    return set;
  }
}

BoundStateSet solve_bound_states_q(const ModelParams& params, int l, int count, const SolverOptions& options) {
  params.validate();
  check_level_request(l, count);
  check_node_count(options.M);
  check_node_count(2 * options.M);
  if (!(params.k > 0.0) && params.eta >= 0.0) {
    // Û_eff stays above zero away from the short-distance curvature tail; confirm on a grid anyway.
    const Discretization probe = discretize_q(params, l, -1e-2, options.M, -1.0);
    lowest_bound_levels(probe.T, count);
  }

  const int top = count - 1 + l;
  const double kappa = decay_estimate(params, top);
  // Halving κ in E_scale doubles Q_max, covering the polynomial prefactor of excited states.
  const double E_scale = -0.125 * params.hbar * params.hbar * kappa * kappa;
  const double eps = lower_truncation(params);

  BoundStateSet set;
  set.l = l;
  const Discretization coarse = discretize_q(params, l, E_scale, options.M, eps);
  set.coarse = lowest_bound_levels(coarse.T, count);
  Discretization fine = discretize_q(params, l, E_scale, 2 * options.M, eps);
  set.fine = lowest_bound_levels(fine.T, count);
  fill_richardson(set);

  const Discretization halved = discretize_q(params, l, E_scale, 2 * options.M, 0.5 * eps);
  const std::vector<double> fine_halved = lowest_bound_levels(halved.T, count);
  for (int i = 0; i < count; ++i) {
    set.error_estimates[static_cast<std::size_t>(i)] += std::abs(fine_halved[static_cast<std::size_t>(i)] - set.fine[static_cast<std::size_t>(i)]);
  }
  if (options.vectors) {
    for (int i = 0; i < count; ++i) set.vectors.push_back(tridiagonal::eigenvector(fine.T, set.fine[static_cast<std::size_t>(i)]));
  }
  set.grid = std::move(fine.grid);
  return set;
}

double convergence_order(const ModelParams& params, int l, int index, int M) {
  SolverOptions opt;
  opt.M = M;
  opt.vectors = false;
  const BoundStateSet first = solve_bound_states(params, l, index + 1, opt);
  opt.M = 2 * M;
  opt.r_max = first.grid.r_max;
  const BoundStateSet second = solve_bound_states(params, l, index + 1, opt);
  const double e1 = first.coarse[static_cast<std::size_t>(index)];
  const double e2 = first.fine[static_cast<std::size_t>(index)];
  const double e4 = second.fine[static_cast<std::size_t>(index)];
  return std::log2(std::abs(e1 - e2) / std::abs(e2 - e4));
}

double conformal_residual(const ModelParams& params, const spectrum::QuantumLevel& level, const RadialGrid& grid) {
  params.validate();
  require_closed_form_sector(params, "conformal_residual");
  const double eta = params.eta;
  const double N = params.N;
  const double h2 = params.hbar * params.hbar;
  const double ang = level.l * (level.l + N - 2.0);
  auto phi_c = [&](double r) {
    return spectrum::eigenfunction_radial(params, level, spectrum::Gauge::conformal, r);
  };
  return weighted_residual(params, grid, 0.5 * (N - 1.0), [&](double r) {
    const StencilValues s = five_point(phi_c, r);
    const double first_coeff = (N - 1.0) / r - eta * (N - 2.0) / (2.0 * r * (eta + r));
    const double kinetic = -h2 * r / (2.0 * (eta + r)) * (s.d2 + first_coeff * s.d1 - ang / (r * r) * s.value);
    const double curvature =
        h2 * eta * (N - 2.0) * (4.0 * (N - 3.0) * r + 3.0 * eta * (N - 2.0)) / (32.0 * r * std::pow(eta + r, 3));
    const double H_phi = kinetic - params.k / (eta + r) * s.value + curvature * s.value;
    return std::make_pair(s.value, H_phi - level.E * s.value);
  });
}

double direct_residual(const ModelParams& params, const spectrum::QuantumLevel& level, const RadialGrid& grid) {
  params.validate();
  require_closed_form_sector(params, "direct_residual");
  const double eta = params.eta;
  const double N = params.N;
  const double h2 = params.hbar * params.hbar;
  const double ang = level.l * (level.l + N - 2.0);
  // Φ recovered from the conformal closed form through the similarity factor.
  auto phi = [&](double r) {
    return std::pow(1.0 + eta / r, 0.25 * (N - 2.0)) *
           spectrum::eigenfunction_radial(params, level, spectrum::Gauge::conformal, r);
  };
  return weighted_residual(params, grid, 0.5, [&](double r) {
    const StencilValues s = five_point(phi, r);
    const double H_phi = r / (2.0 * (eta + r)) *
                         (-h2 * (s.d2 + (N - 1.0) / r * s.d1 - ang / (r * r) * s.value) - 2.0 * params.k / r * s.value);
    return std::make_pair(s.value, H_phi - level.E * s.value);
  });
}

double tricomi_condition(const ModelParams& params, int l, double E) {
  const double a = -spectrum::kummer_alpha(params, l, E);
  const double x = spectrum::kummer_rho(params, E, std::abs(params.eta));
  return special::tricomi_U(a, spectrum::kummer_beta(params, l), x).value;
}

double tricomi_eigenfunction(const ModelParams& params, int l, double E, double r) {
  params.validate();
  if (!(params.eta < 0.0)) throw SectorError("tricomi_eigenfunction: needs eta < 0");
  if (!(r >= -params.eta)) throw DomainError("tricomi_eigenfunction: r below |eta|");
  const double rho = spectrum::kummer_rho(params, E, r);
  const double a = -spectrum::kummer_alpha(params, l, E);
  return std::pow(rho, l) * std::exp(-0.5 * rho) * special::tricomi_U(a, spectrum::kummer_beta(params, l), rho).value;
}

NegativeEtaSpectrum dirichlet_spectrum_negative_eta(const ModelParams& params, int l, EnergyBracket bracket,
                                                    int count, const SolverOptions& fd_options) {
  params.validate();
  check_level_request(l, count);
  if (!(params.eta < 0.0) || !(params.k > 0.0)) {
    throw SectorError("dirichlet_spectrum_negative_eta: needs eta < 0 and k > 0");
  }
  const double h2 = params.hbar * params.hbar;
  const double k2 = params.k * params.k;
  const double s0 = spectrum::principal_s(params, l);
  if (bracket.lower == 0.0) bracket.lower = -10.0 * k2 / (h2 * s0 * s0);
  if (bracket.upper == 0.0) bracket.upper = -k2 / (8.0 * h2 * std::pow(s0 + count + 2.0, 2));
  if (!(bracket.lower < bracket.upper) || !(bracket.upper < 0.0)) {
    throw BadParams("dirichlet_spectrum_negative_eta: need lower < upper < 0");
  }

  NegativeEtaSpectrum out;
  auto g = [&](double E) { return tricomi_condition(params, l, E); };
  const int per_decade = 200;
  const double span = std::log10(bracket.lower / bracket.upper);
  const int samples = std::max(2, static_cast<int>(std::ceil(span * per_decade)) + 1);
  double E_prev = bracket.lower;
  double g_prev = g(E_prev);
  for (int i = 1; i < samples && static_cast<int>(out.energies.size()) < count; ++i) {
    // |E| decreases geometrically from |lower| to |upper|.
    const double E = bracket.lower * std::pow(bracket.upper / bracket.lower, static_cast<double>(i) / (samples - 1));
    const double g_cur = g(E);
    if (g_cur == 0.0) {
      out.energies.push_back(E);
    } else if ((g_prev < 0.0) != (g_cur < 0.0) && g_prev != 0.0) {
      boost::uintmax_t max_iter = 200;
      const auto tol = [](double a, double b) { return std::abs(b - a) <= 1e-12 * std::max(1.0, std::abs(a)); };
      const auto root = boost::math::tools::toms748_solve(g, E_prev, E, g_prev, g_cur, tol, max_iter);
      out.energies.push_back(0.5 * (root.first + root.second));
    }
    E_prev = E;
    g_prev = g_cur;
  }
  if (static_cast<int>(out.energies.size()) < count) {
    throw NoRootInBracket("found " + std::to_string(out.energies.size()) + " of " + std::to_string(count) +
                          " Tricomi roots in [" + std::to_string(bracket.lower) + ", " +
                          std::to_string(bracket.upper) + "]");
  }

  SolverOptions opt = fd_options;
  opt.vectors = false;
  const BoundStateSet fd = solve_bound_states(params, l, count, opt);
  out.fd_energies = fd.energies;
  for (int i = 0; i < count; ++i) {
    const double E = out.energies[static_cast<std::size_t>(i)];
    const double rel = std::abs(E - fd.energies[static_cast<std::size_t>(i)]) / std::abs(E);
    out.rel_diff.push_back(rel);
    out.max_rel_diff = std::max(out.max_rel_diff, rel);
  }
  return out;
}

Eigen::MatrixXd orthogonality_matrix(const ModelParams& params, int l, const std::vector<int>& ns,
                                     spectrum::Gauge gauge) {
  return orthogonality_matrix(params, l, ns, gauge, gauge);
}

Eigen::MatrixXd orthogonality_matrix(const ModelParams& params, int l, const std::vector<int>& ns,
                                     spectrum::Gauge gauge, spectrum::Gauge measure_gauge) {
  const Eigen::Index n = static_cast<Eigen::Index>(ns.size());
  std::vector<spectrum::QuantumLevel> levels;
  for (int nr : ns) levels.push_back(spectrum::energy(params, nr, l));
  Eigen::MatrixXd G(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      G(i, j) = spectrum::overlap(params, levels[static_cast<std::size_t>(i)], levels[static_cast<std::size_t>(j)],
                                  gauge, measure_gauge);
      G(j, i) = G(i, j);
    }
  }
  return G;
}

}  // namespace taubnut::radial
