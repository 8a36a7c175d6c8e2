#include "taubnut/cli/commands.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <tuple>

#include "taubnut/classical.hpp"
#include "taubnut/cli/parallel.hpp"
#include "taubnut/cli/verify.hpp"
#include "taubnut/errors.hpp"
#include "taubnut/geometry.hpp"
#include "taubnut/radial_solver.hpp"
#include "taubnut/spectrum.hpp"

namespace taubnut::cli {
namespace {

using Cells = std::vector<std::optional<double>>;

struct SectorLevels {
  std::vector<double> numeric;
  std::vector<double> rel_diff;  ///< only filled by the Tricomi path
};

class Sink {
 public:
  Sink(const RunConfig& config, std::ostream& fallback) : os_(&fallback) {
    if (!config.output.empty()) {
      file_ = std::make_unique<std::ofstream>(config.output, std::ios::binary);
      if (!*file_) throw BadParams("cannot open output file '" + config.output + "'");
      os_ = file_.get();
    }
  }
  std::ostream& get() { return *os_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_;
};

void emit_table(const RunConfig& config, const CsvTable& table, const char* command, std::ostream& out,
                const std::string& extra_json = "") {
  Sink sink(config, out);
  if (config.format == Format::csv) {
    table.write_csv(sink.get());
    return;
  }
  sink.get() << "{\n\"command\": \"" << command << "\",\n\"rows\": " << table.to_json();
  if (!extra_json.empty()) sink.get() << ",\n" << extra_json;
  sink.get() << "\n}\n";
}

ModelParams params_with_eta(const RunConfig& config, double eta) {
  ModelParams p = config.params;
  p.eta = eta;
  p.validate();
  return p;
}

bool closed_form_sector(const ModelParams& p) { return p.k > 0.0 && p.eta >= 0.0; }

}  // namespace

CsvTable spectrum_table(const RunConfig& config, std::string* note) {
  CsvTable table({"eta", "N", "k", "hbar", "n", "l", "frak_n", "E_closed", "E_numeric", "rel_diff", "K", "degeneracy"});
  for (double eta : config.etas) {
    const ModelParams p = params_with_eta(config, eta);
    if (!closed_form_sector(p) && !config.numeric) {
      // Raised through the library so the message matches other callers.
      (void)spectrum::energy(p, 0, 0);
    }
  }

  if (config.numeric && !(config.params.k > 0.0)) {
    // The discrete operator decides; a bound state here would be a solver defect.
    for (double eta : config.etas) {
      try {
        radial::SolverOptions options;
        options.M = config.M;
        options.vectors = false;
        (void)radial::solve_bound_states(params_with_eta(config, eta), 0, 1, options);
        throw ConvergenceFailure("spectrum: negative eigenvalue found for a k <= 0 sector");
      } catch (const NoBoundStates&) {
      }
    }
    if (note) *note = "no bound states: k <= 0 sector has purely continuous spectrum";
    return table;
  }

  // One numeric task per (η, l); each solves all levels n = 0..levels−1−l at once.
  std::vector<std::pair<std::size_t, int>> tasks;
  if (config.numeric) {
    for (std::size_t e = 0; e < config.etas.size(); ++e) {
      for (int l = 0; l < config.levels; ++l) tasks.emplace_back(e, l);
    }
  }
  const auto solved = parallel_map<SectorLevels>(tasks.size(), config.jobs, [&](std::size_t i) {
    const auto [e, l] = tasks[i];
    const ModelParams p = params_with_eta(config, config.etas[e]);
    const int count = config.levels - l;
    radial::SolverOptions options;
    options.M = config.M;
    options.vectors = false;
    SectorLevels out;
    if (p.eta >= 0.0) {
      out.numeric = radial::solve_bound_states(p, l, count, options).energies;
    } else {
      const auto neg = radial::dirichlet_spectrum_negative_eta(p, l, {}, count, options);
      out.numeric = neg.energies;
      out.rel_diff = neg.rel_diff;
    }
    return out;
  });
  std::map<std::pair<std::size_t, int>, const SectorLevels*> by_task;
  for (std::size_t i = 0; i < tasks.size(); ++i) by_task[tasks[i]] = &solved[i];

  for (std::size_t e = 0; e < config.etas.size(); ++e) {
    const ModelParams p = params_with_eta(config, config.etas[e]);
    for (int frak = 0; frak < config.levels; ++frak) {
      for (int l = 0; l <= frak; ++l) {
        const int n = frak - l;
        std::optional<double> closed, numeric, rel;
        if (closed_form_sector(p)) closed = spectrum::energy(p, n, l).E;
        if (config.numeric) {
          const SectorLevels& s = *by_task.at({e, l});
          numeric = s.numeric.at(static_cast<std::size_t>(n));
          if (closed) {
            rel = std::abs(*numeric - *closed) / std::abs(*closed);
          } else if (!s.rel_diff.empty()) {
            rel = s.rel_diff.at(static_cast<std::size_t>(n));
          }
        }
        const double E = closed ? *closed : *numeric;
        const double degeneracy = p.eta >= 0.0 ? static_cast<double>(spectrum::degeneracy(p.N, frak))
                                               : static_cast<double>(spectrum::harmonic_dimension(p.N, l));
        table.add_row({p.eta, static_cast<double>(p.N), p.k, p.hbar, static_cast<double>(n),
                       static_cast<double>(l), static_cast<double>(frak), closed, numeric, rel, p.k + p.eta * E,
                       degeneracy});
      }
    }
  }
  return table;
}

VerificationReport compare_with_golden(const CsvTable& table, const std::string& golden_path, double rel_tol) {
  const CsvData golden = read_csv(golden_path);
  const std::size_t g_eta = golden.column("eta"), g_n = golden.column("n"), g_l = golden.column("l"),
                    g_E = golden.column("E_numeric");
  const auto& header = table.header();
  auto col = [&](const char* name) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    throw BadParams(std::string("table has no column ") + name);
  };
  const std::size_t t_eta = col("eta"), t_n = col("n"), t_l = col("l"), t_E = col("E_numeric");

  VerificationReport report;
  for (const auto& row : golden.rows) {
    double eta = 0.0, E_ref = 0.0;
    int n = 0, l = 0;
    try {
      eta = std::stod(row[g_eta]);
      n = std::stoi(row[g_n]);
      l = std::stoi(row[g_l]);
      E_ref = std::stod(row[g_E]);
    } catch (const std::exception&) {
      throw BadParams("malformed row in golden file '" + golden_path + "'");
    }
    std::ostringstream name;
    name << "golden eta=" << format_number(eta) << " n=" << n << " l=" << l;
    bool found = false;
    for (const auto& t : table.rows()) {
      if (*t[t_eta] == eta && static_cast<int>(*t[t_n]) == n && static_cast<int>(*t[t_l]) == l && t[t_E]) {
        report.add(name.str(), std::abs(*t[t_E] - E_ref) / std::abs(E_ref), rel_tol);
        found = true;
        break;
      }
    }
    if (!found) report.add_flag(name.str() + " (missing from output)", false);
  }
  if (golden.rows.empty()) report.add_flag("golden file has rows", false);
  return report;
}

CsvTable geometry_table(const RunConfig& config) {
  const ModelParams p = params_with_eta(config, config.etas.front());
  const std::vector<double> rs = config.r.values();
  for (double r : rs) require_in_domain(p, r, "geometry");
  const auto rows = parallel_map<Cells>(rs.size(), config.jobs, [&](std::size_t i) {
    const double r = rs[i];
    Cells row{r, geometry::scalar_curvature(p, r), geometry::conformal_factor(p, r), std::nullopt, std::nullopt};
    if (p.eta >= 0.0) {
      const auto e = geometry::embedding_profile(p, r);
      row[3] = e.x_radial;
      row[4] = e.z;
    }
    return row;
  });
  CsvTable table({"r", "R", "f", "x_radial", "z"});
  for (const auto& row : rows) table.add_row(row);
  return table;
}

CsvTable potential_table(const RunConfig& config) {
  const ModelParams p = params_with_eta(config, config.etas.front());
  CsvTable table({"r", "U", "U_eff_classical", "U_eff_quantum", "U_kepler", "U_eff_kepler"});
  for (double r : config.r.values()) {
    require_in_domain(p, r, "potential");
    table.add_row({r, -p.k / (p.eta + r), classical::classical_effective_potential(p, config.L2, r),
                   spectrum::quantum_effective_potential(p, config.l, r), -p.k / r,
                   config.L2 / (2.0 * r * r) - p.k / r});
  }
  return table;
}

CsvTable orbit_table(const RunConfig& config, OrbitSummary& summary) {
  const ModelParams p = params_with_eta(config, config.etas.front());
  const classical::PhasePoint x0{config.q0, config.p0};
  classical::validate_point(p, x0);
  classical::IntegratorOptions options;
  options.scheme = config.scheme == "midpoint" ? classical::Scheme::implicit_midpoint : classical::Scheme::triple_jump;
  const auto traj = classical::integrate_orbit(p, x0, config.dt, config.steps, config.sample_every, options);

  summary.H0 = traj.initial.H;
  summary.bound = traj.bound;
  summary.escaped = !traj.bound;
  summary.drift_H = traj.max_drift.H;
  summary.drift_L2 = traj.max_drift.L2;
  summary.drift_R = traj.max_drift.R;
  summary.gate_passed = !traj.bound || (summary.drift_H <= config.drift_gate && summary.drift_L2 <= config.drift_gate &&
                                        summary.drift_R <= config.drift_gate);

  std::vector<std::string> header{"t"};
  for (int i = 1; i <= p.N; ++i) header.push_back("q" + std::to_string(i));
  for (int i = 1; i <= p.N; ++i) header.push_back("p" + std::to_string(i));
  for (const char* c : {"r", "H", "L2", "drift_H", "drift_L2", "drift_R"}) header.emplace_back(c);
  CsvTable table(header);
  for (std::size_t s = 0; s < traj.points.size(); ++s) {
    const auto& x = traj.points[s];
    Cells row{traj.times[s]};
    for (double v : x.q) row.emplace_back(v);
    for (double v : x.p) row.emplace_back(v);
    const auto inv = classical::invariants(p, x);
    row.emplace_back(classical::radius(x));
    row.emplace_back(inv.H);
    row.emplace_back(inv.L2);
    row.emplace_back(traj.drifts[s].H);
    row.emplace_back(traj.drifts[s].L2);
    row.emplace_back(traj.drifts[s].R);
    table.add_row(std::move(row));
  }
  return table;
}

int cmd_spectrum(const RunConfig& config, std::ostream& out, std::ostream& err) {
  std::string note;
  const CsvTable table = spectrum_table(config, &note);
  if (!note.empty()) err << note << "\n";
  int code = exit_ok;
  std::string extra;
  if (!config.golden.empty()) {
    const VerificationReport golden = compare_with_golden(table, config.golden, config.golden_tol);
    for (const auto& c : golden.checks) {
      if (!c.passed) err << "golden mismatch: " << c.name << " rel " << format_number(c.max_residual) << "\n";
    }
    err << "golden comparison: " << golden.checks.size() << " rows, max rel "
        << format_number(golden.max_residual()) << ", " << (golden.passed() ? "pass" : "FAIL") << "\n";
    extra = "\"golden\": {\"rows\": " + std::to_string(golden.checks.size()) +
            ", \"max_rel\": " + format_number(golden.max_residual()) +
            ", \"pass\": " + (golden.passed() ? "true" : "false") + "}";
    if (!golden.passed()) code = exit_verification;
  }
  emit_table(config, table, "spectrum", out, extra);
  return code;
}

int cmd_geometry(const RunConfig& config, std::ostream& out, std::ostream&) {
  emit_table(config, geometry_table(config), "geometry", out);
  return exit_ok;
}

int cmd_potential(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const CsvTable table = potential_table(config);
  std::string extra;
  if (config.quantum) {
    const ModelParams p = params_with_eta(config, config.etas.front());
    try {
      const auto m = spectrum::quantum_effective_minimum(p, config.l);
      err << "quantum effective minimum (l=" << config.l << "): r=" << format_number(m.r_min)
          << " U=" << format_number(m.value) << "\n";
      extra = "\"quantum_minimum\": {\"l\": " + std::to_string(config.l) + ", \"r_min\": " + format_number(m.r_min) +
              ", \"value\": " + format_number(m.value) + "}";
    } catch (const NoMinimum& e) {
      const char* kind = e.kind() == NoMinimum::Kind::unbounded_at_origin ? "unbounded_at_origin" : "no_local_minimum";
      err << "quantum effective potential (l=" << config.l << "): " << kind << "\n";
      extra = "\"quantum_minimum\": {\"l\": " + std::to_string(config.l) + ", \"none\": \"" + kind + "\"}";
    }
  }
  emit_table(config, table, "potential", out, extra);
  return exit_ok;
}

int cmd_orbit(const RunConfig& config, std::ostream& out, std::ostream& err) {
  OrbitSummary s;
  const CsvTable table = orbit_table(config, s);
  err << "H0=" << format_number(s.H0) << " " << (s.bound ? "bound" : "escape")
      << " max_drift H=" << format_number(s.drift_H) << " L2=" << format_number(s.drift_L2)
      << " R=" << format_number(s.drift_R);
  if (s.bound) err << " gate=" << format_number(config.drift_gate) << (s.gate_passed ? " pass" : " FAIL");
  err << "\n";
  std::ostringstream extra;
  extra << "\"summary\": {\"H0\": " << format_number(s.H0) << ", \"bound\": " << (s.bound ? "true" : "false")
        << ", \"escaped\": " << (s.escaped ? "true" : "false") << ", \"drift_H\": " << format_number(s.drift_H)
        << ", \"drift_L2\": " << format_number(s.drift_L2) << ", \"drift_R\": " << format_number(s.drift_R)
        << ", \"gate_passed\": " << (s.gate_passed ? "true" : "false") << "}";
  emit_table(config, table, "orbit", out, extra.str());
  return s.gate_passed ? exit_ok : exit_verification;
}

int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const VerificationReport report = run_verification(config);
  for (const auto& c : report.checks) {
    if (!c.passed) {
      err << "FAILED " << c.name << ": " << format_number(c.max_residual) << " > " << format_number(c.tolerance)
          << "\n";
    }
  }
  Sink sink(config, out);
  sink.get() << report_to_json(report, config) << "\n";
  return report.passed() ? exit_ok : exit_verification;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig config;
  if (const auto code = parse_command_line(argc, argv, config, out, err)) return *code;
  try {
    switch (config.command) {
      case Command::spectrum: return cmd_spectrum(config, out, err);
      case Command::geometry: return cmd_geometry(config, out, err);
      case Command::potential: return cmd_potential(config, out, err);
      case Command::orbit: return cmd_orbit(config, out, err);
      case Command::verify: return cmd_verify(config, out, err);
    }
  } catch (const classical::DomainBreach& e) {
    err << "error: " << e.what() << " (last valid time " << format_number(e.last_time()) << ")\n";
    return exit_numeric;
  } catch (const BadParams& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const SectorError& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const Unsupported& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const NonAttractive& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::exception& e) {
    err << "numeric failure: " << e.what() << "\n";
    return exit_numeric;
  }
  return exit_usage;
}

}  // namespace taubnut::cli
