#include "taubnut/cli/config.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <ostream>
#include <sstream>

#include "taubnut/errors.hpp"

namespace taubnut::cli {
namespace {

double parse_real(const std::string& token, const std::string& context) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(token, &used);
  } catch (const std::exception&) {
    throw BadParams("cannot parse '" + token + "' in " + context);
  }
  if (used != token.size()) throw BadParams("trailing characters in '" + token + "' in " + context);
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream is(text);
  while (std::getline(is, cur, sep)) parts.push_back(cur);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

}  // namespace

const char* to_string(Command c) noexcept {
  switch (c) {
    case Command::spectrum: return "spectrum";
    case Command::geometry: return "geometry";
    case Command::potential: return "potential";
    case Command::orbit: return "orbit";
    case Command::verify: return "verify";
  }
  return "unknown";
}

std::vector<double> Range::values() const {
  std::vector<double> v(static_cast<std::size_t>(count));
  if (count == 1) {
    v[0] = start;
    return v;
  }
  for (int i = 0; i < count; ++i) {
    // Endpoints are reproduced exactly.
    v[static_cast<std::size_t>(i)] = i + 1 == count ? stop : start + (stop - start) * i / (count - 1);
  }
  return v;
}

Range parse_range(const std::string& text) {
  const std::vector<std::string> parts = split(text, ':');
  Range r;
  if (parts.size() == 1) {
    r.start = r.stop = parse_real(parts[0], "range");
    r.count = 1;
    return r;
  }
  if (parts.size() != 3) throw BadParams("range must be start:stop:count, got '" + text + "'");
  r.start = parse_real(parts[0], "range start");
  r.stop = parse_real(parts[1], "range stop");
  const double count = parse_real(parts[2], "range count");
  if (count < 1.0 || count != static_cast<int>(count)) throw BadParams("range count must be a positive integer");
  r.count = static_cast<int>(count);
  return r;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  for (const std::string& token : split(text, ',')) out.push_back(parse_real(token, "list"));
  if (out.empty()) throw BadParams("empty list");
  return out;
}

void RunConfig::validate() const {
  params.validate();
  if (etas.empty()) throw BadParams("--eta needs at least one value");
  if (M < 1024 || M > (1 << 20)) throw BadParams("--M must lie in [1024, 2^20]");
  if (levels < 1) throw BadParams("--levels must be positive");
  if (r.count < 1) throw BadParams("--r range is empty");
  if (l < 0) throw BadParams("--l must be nonnegative");
  if (L2 < 0.0) throw BadParams("--L2 must be nonnegative");
  if (!(dt > 0.0) || steps < 0 || sample_every < 1) throw BadParams("orbit needs dt > 0, steps >= 0, sample-every >= 1");
  if (scheme != "midpoint" && scheme != "triple-jump") throw BadParams("--scheme must be midpoint or triple-jump");
  if (samples < 1) throw BadParams("--samples must be positive");
  if (jobs < 1) throw BadParams("--jobs must be positive");
}

int resolve_jobs(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("TAUBNUT_JOBS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

std::optional<int> parse_command_line(int argc, const char* const* argv, RunConfig& config,
                                      std::ostream& out, std::ostream& err) {
  CLI::App app{"Deformed Coulomb system on a Taub-NUT-type space: spectra, geometry, orbits, verification"};
  app.set_config("--config", "", "key=value file; command-line flags take precedence");
  app.require_subcommand(1, 1);
  app.fallthrough();

  std::string eta_text = "0";
  std::string r_text = "0.01:10:200";
  std::string q_text = "1,0,0";
  std::string p_text = "0,1,0";
  std::string format_text = "csv";
  int jobs_flag = 0;

  app.add_option("--N", config.params.N, "dimension N >= 2")->capture_default_str();
  app.add_option("--eta", eta_text, "deformation eta; spectrum accepts a comma list")->capture_default_str();
  app.add_option("--k", config.params.k, "coupling constant k")->capture_default_str();
  app.add_option("--hbar", config.params.hbar, "action unit hbar > 0")->capture_default_str();
  app.add_option("--format", format_text, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app.add_option("--output,-o", config.output, "output file (default stdout)");
  app.add_option("--jobs,-j", jobs_flag, "worker threads (fallback TAUBNUT_JOBS, else 1)");

  app.add_option("--levels", config.levels, "spectrum: principal levels 0..levels-1")->capture_default_str();
  app.add_flag("--numeric", config.numeric, "spectrum: add finite-difference / Tricomi values");
  app.add_option("--M", config.M, "spectrum: coarse grid size in [1024, 2^20]")->capture_default_str();
  app.add_option("--golden", config.golden, "spectrum: CSV of reference numeric energies to compare against");
  app.add_option("--golden-tol", config.golden_tol, "spectrum: relative tolerance for --golden")->capture_default_str();

  app.add_option("--r", r_text, "geometry/potential: radii start:stop:count")->capture_default_str();
  app.add_option("--L2", config.L2, "potential: classical L^2")->capture_default_str();
  app.add_option("--l", config.l, "potential: quantum angular momentum")->capture_default_str();
  app.add_flag("--quantum", config.quantum, "potential: report the quantum effective minimum");

  app.add_option("--q", q_text, "orbit: initial position, comma list")->capture_default_str();
  app.add_option("--p", p_text, "orbit: initial momentum, comma list")->capture_default_str();
  app.add_option("--dt", config.dt, "orbit: time step")->capture_default_str();
  app.add_option("--steps", config.steps, "orbit: number of steps")->capture_default_str();
  app.add_option("--sample-every", config.sample_every, "orbit: sampling stride")->capture_default_str();
  app.add_option("--scheme", config.scheme, "orbit: midpoint or triple-jump")->capture_default_str();
  app.add_option("--drift-gate", config.drift_gate, "orbit: relative drift limit for bound orbits")->capture_default_str();

  app.add_option("--seed", config.seed, "verify: RNG seed")->capture_default_str();
  app.add_option("--samples", config.samples, "verify: random points for the functional relation")->capture_default_str();
  app.add_flag("--perturb-sign", config.perturb_sign, "verify: use the other quadratic root (negative control)");

  app.add_subcommand("spectrum", "closed-form and numeric energy levels");
  app.add_subcommand("geometry", "curvature, conformal factor and embedding profile");
  app.add_subcommand("potential", "deformed potential and effective potentials");
  app.add_subcommand("orbit", "symplectic orbit with invariant drift");
  app.add_subcommand("verify", "full property suite as a JSON report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  if (name == "spectrum") config.command = Command::spectrum;
  if (name == "geometry") config.command = Command::geometry;
  if (name == "potential") config.command = Command::potential;
  if (name == "orbit") config.command = Command::orbit;
  if (name == "verify") config.command = Command::verify;

  try {
    config.etas = parse_list(eta_text);
    config.eta_given = app.count("--eta") > 0;
    config.params.eta = config.etas.front();
    config.r = parse_range(r_text);
    config.q0 = parse_list(q_text);
    config.p0 = parse_list(p_text);
    config.format = format_text == "json" ? Format::json : Format::csv;
    config.jobs = resolve_jobs(jobs_flag);
    config.validate();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return std::nullopt;
}

}  // namespace taubnut::cli
