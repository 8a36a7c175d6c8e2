#pragma once

#include <string>

#include "taubnut/cli/config.hpp"
#include "taubnut/report.hpp"

namespace taubnut::cli {

/// Runs the property suite for every η in config.etas (one worker per η) plus the
/// parameter-independent checks. Each η draws from its own generator seeded with
/// config.seed and the η index, so results do not depend on the job count.
VerificationReport run_verification(const RunConfig& config);

/// {schema_version, config, checks[], pass, runtime_s}.
std::string report_to_json(const VerificationReport& report, const RunConfig& config);

inline constexpr int kReportSchemaVersion = 1;

}  // namespace taubnut::cli
