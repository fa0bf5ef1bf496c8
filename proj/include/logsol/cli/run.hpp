#pragma once

#include "logsol/cli/config.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace logsol::cli {

enum ExitCode { kConverged = 0, kConfigError = 1, kNotConverged = 2 };

/// Everything a run writes, before it touches the filesystem.
struct RunResult {
  int exit_code = kConverged;
  nlohmann::json report;
  std::string csv;
  double wall_seconds = 0.0; ///< kept out of the report so reruns compare byte for byte
};

inline constexpr const char *kReportFile = "report.json";
inline constexpr const char *kFieldFile = "field.csv";
inline constexpr const char *kTimingFile = "timing.json";

/// Executes a validated config. `threads` caps multistart parallelism
/// (<= 0: OpenMP default). Numerical failures surface as exit code 2 with a
/// partial report.
RunResult execute(const ExperimentConfig &config, int threads = 0);

/// Thread cap from LOGSOLVE_THREADS; 0 when unset. Throws ConfigError on a
/// malformed value.
int threads_from_environment();

/// Full CLI flow: load and validate, execute, then write report.json,
/// field.csv and timing.json into out_dir. Messages go to `err`.
int run(RunMode mode, const std::string &config_path, const std::string &out_dir,
        std::ostream &err);

} // namespace logsol::cli
