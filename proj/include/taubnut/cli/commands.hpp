#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "taubnut/cli/config.hpp"
#include "taubnut/cli/output.hpp"
#include "taubnut/report.hpp"

namespace taubnut::cli {

enum ExitCode : int { exit_ok = 0, exit_verification = 1, exit_usage = 2, exit_numeric = 3 };

/// Spectrum rows ordered by η, then 𝔫, then l. In the closed-form sector E_numeric
/// is filled only with `numeric`; for η < 0 (with `numeric`) E_closed is empty and
/// rel_diff compares the Tricomi root with the finite-difference value. Throws
/// SectorError outside the closed-form sector without `numeric`. Repulsive or free
/// sectors with `numeric` yield a header-only table.
CsvTable spectrum_table(const RunConfig& config, std::string* note = nullptr);

/// Rows whose (eta, n, l) appear in the golden CSV are compared on E_numeric.
VerificationReport compare_with_golden(const CsvTable& table, const std::string& golden_path, double rel_tol);

CsvTable geometry_table(const RunConfig& config);
CsvTable potential_table(const RunConfig& config);

struct OrbitSummary {
  double H0 = 0.0;
  bool bound = false;
  bool escaped = false;  ///< H₀ ≥ 0: the orbit is not confined
  double drift_H = 0.0;
  double drift_L2 = 0.0;
  double drift_R = 0.0;
  bool gate_passed = true;
};

CsvTable orbit_table(const RunConfig& config, OrbitSummary& summary);

int cmd_spectrum(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_geometry(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_potential(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_orbit(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses the command line, dispatches, and maps library errors onto exit codes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace taubnut::cli
