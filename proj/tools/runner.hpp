#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "config.hpp"
#include "report.hpp"

namespace hpade::cli {

enum ExitCode : int { kPass = 0, kCheckFailure = 1, kConfigError = 2, kNumericalFailure = 3 };

struct RunOptions {
  std::optional<std::filesystem::path> output_dir;
  std::optional<int> n_max;
  bool json_only = false;
};

inline constexpr double kRateTolerance = 0.15;
inline constexpr double kRho0Tolerance = 0.10;
/// A sequence with predicted rate 0 passes when its post-transient values stay below this.
inline constexpr double kExactTolerance = 1e-7;

/// Runs every enabled check and fills the report; writes nothing.
Report run_checks(const ExperimentConfig& cfg);

/// Loads the config, runs the checks and writes report.json, the CSV files and
/// (unless json_only) the SVG plots. Returns the exit code.
int run(const std::filesystem::path& config, const RunOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace hpade::cli
