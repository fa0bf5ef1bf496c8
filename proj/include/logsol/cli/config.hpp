#pragma once

#include "logsol/coefficients.hpp"
#include "logsol/solver.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace logsol::cli {

enum class RunMode { Solve, Multistart, Gausson, CheckLogSob, PSolve };

std::string to_string(RunMode m);
std::optional<RunMode> parse_mode(std::string_view name);

/// Configuration rejected before any computation; carries the 1-based line of
/// the offending key or syntax error (0 when the file itself is unreadable).
class ConfigError : public std::runtime_error {
public:
  ConfigError(int line, const std::string &what);
  int line() const { return line_; }

private:
  int line_;
};

struct InitialSpec {
  enum class Kind { Random, Bump, Gausson };
  Kind kind = Kind::Random;
  std::array<double, 2> center{0.0, 0.0};
  double amplitude = 1.0;
  double sigma = 1.0;
  double perturbation = 0.0; ///< Gausson start only: amplitude of a seeded smooth perturbation
};

struct LogSobSpec {
  int fields = 100;
  std::vector<double> a{0.1, 0.5, 1.0, 2.0, 5.0};
  std::optional<double> weighted_a;
  double tolerance = 1e-10;
};

struct ExperimentConfig {
  RunMode mode = RunMode::Solve;
  int dim = 1;
  std::array<int, 2> cells{8, 1};
  std::array<double, 2> box{1.0, 1.0};
  Boundary boundary = Boundary::Periodic;
  std::array<double, 2> origin{0.0, 0.0};
  CoefficientDescriptor coefficients;
  double split_delta = SplitParams::default_delta();
  SolverConfig solver;
  InitialSpec initial;
  std::optional<double> p;
  LogSobSpec logsob;

  Grid grid() const;
};

/// Parses and validates a JSON config; the mode comes from the subcommand and
/// must agree with an optional "mode" key. Unknown keys are rejected.
ExperimentConfig parse_config(std::string_view text, RunMode mode);
ExperimentConfig load_config(const std::string &path, RunMode mode);

/// Canonical JSON form; parse_config(to_json(c).dump(), c.mode) == c.
nlohmann::json to_json(const ExperimentConfig &c);

} // namespace logsol::cli
