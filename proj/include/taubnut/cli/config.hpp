#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "taubnut/model.hpp"

namespace taubnut::cli {

enum class Command { spectrum, geometry, potential, orbit, verify };
enum class Format { csv, json };

const char* to_string(Command c) noexcept;

/// Inclusive `start:stop:count` sequence; a bare number is a one-point range.
struct Range {
  double start = 0.0;
  double stop = 0.0;
  int count = 1;

  std::vector<double> values() const;
};

/// Throws BadParams on malformed input or count < 1.
Range parse_range(const std::string& text);

/// Comma-separated reals; throws BadParams when empty or malformed.
std::vector<double> parse_list(const std::string& text);

struct RunConfig {
  Command command = Command::verify;
  ModelParams params;
  std::vector<double> etas{0.0};  ///< spectrum and verify sweep every value; other commands use the first
  bool eta_given = false;         ///< false lets verify fall back to its own η sweep
  Format format = Format::csv;
  std::string output;  ///< empty writes to stdout
  int jobs = 1;

  // spectrum
  int levels = 4;
  bool numeric = false;
  int M = 16384;
  std::string golden;
  double golden_tol = 1e-8;

  // geometry and potential
  Range r{0.01, 10.0, 200};
  double L2 = 1.0;
  int l = 0;
  bool quantum = false;

  // orbit
  std::vector<double> q0{1.0, 0.0, 0.0};
  std::vector<double> p0{0.0, 1.0, 0.0};
  double dt = 1e-3;
  long steps = 10000;
  long sample_every = 100;
  std::string scheme = "triple-jump";
  double drift_gate = 1e-7;

  // verify
  std::uint64_t seed = 1;
  int samples = 1000;
  bool perturb_sign = false;

  /// Throws BadParams for empty ranges, M outside [1024, 2²⁰] and similar.
  void validate() const;
};

/// --jobs when positive, else TAUBNUT_JOBS, else 1.
int resolve_jobs(int flag_value);

/// Parses argv with precedence flags > --config file (key=value lines) > defaults.
/// Returns the exit code when the program should stop (help, usage error).
std::optional<int> parse_command_line(int argc, const char* const* argv, RunConfig& config,
                                      std::ostream& out, std::ostream& err);

}  // namespace taubnut::cli
