#include "logsol/cli/artifact.hpp"
#include "logsol/cli/config.hpp"
#include "logsol/cli/run.hpp"

#include "../support/property.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace logsol;
using namespace logsol::cli;
using namespace logsol::testing;
using nlohmann::json;

namespace {

const char *kMinimal = R"({
  "grid": {"dim": 1, "cells": [256], "box": [8]},
  "coefficients": {
    "V": {"constant": 0.0, "modes": [{"kind": "sin", "amplitude": 0.2, "frequency": [1]}]},
    "Q": {"constant": 1.0, "modes": [{"kind": "cos", "amplitude": 0.3, "frequency": [1]}]}
  }
})";

const char *kGausson = R"({
  "grid": {"dim": 1, "cells": [1024], "box": [16], "boundary": "dirichlet", "origin": [-8]},
  "coefficients": {"V": {"constant": 0.0}, "Q": {"constant": 1.0}}
})";

int error_line(const std::string &text, RunMode mode = RunMode::Solve) {
  try {
    (void)parse_config(text, mode);
  } catch (const ConfigError &e) {
    return e.line();
  }
  return -1;
}

std::filesystem::path temp_dir(const std::string &name) {
  auto dir = std::filesystem::temp_directory_path() / ("logsolve_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

std::string slurp(const std::filesystem::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

} // namespace

TEST(Config, MinimalDefaults) {
  const ExperimentConfig c = parse_config(kMinimal, RunMode::Solve);
  EXPECT_EQ(c.dim, 1);
  EXPECT_EQ(c.cells[0], 256);
  EXPECT_EQ(c.boundary, Boundary::Periodic);
  EXPECT_EQ(c.coefficients.Q.modes.size(), 1u);
  EXPECT_EQ(c.split_delta, SplitParams::default_delta());
  EXPECT_EQ(c.solver.tol_residual, 1e-8);
}

TEST(Config, ErrorsCarryLineNumbers) {
  // Missing Q: reported at the "coefficients" key.
  EXPECT_EQ(error_line("{\n \"grid\": {\"dim\": 1, \"cells\": [64], \"box\": [2]},\n"
                       " \"coefficients\": {\"V\": {\"constant\": 0}}\n}"),
            3);
  // Unknown key.
  EXPECT_EQ(error_line("{\n \"grid\": {\"dim\": 1, \"cells\": [64], \"box\": [2]},\n"
                       " \"coefficients\": {\"V\": {}, \"Q\": {\"constant\": 1}},\n"
                       " \"solver\": {\n   \"tolerance\": 1\n }\n}"),
            5);
  // Syntax error on line 2.
  EXPECT_EQ(error_line("{\n \"grid\": {,\n}"), 2);
  // Out-of-range value.
  EXPECT_EQ(error_line("{\n \"grid\": {\"dim\": 1, \"cells\": [64], \"box\": [2]},\n"
                       " \"coefficients\": {\"V\": {}, \"Q\": {\"constant\": 1}},\n"
                       " \"split_delta\": 0.5\n}"),
            4);
  // Negative Q.
  EXPECT_EQ(error_line("{\n \"grid\": {\"dim\": 1, \"cells\": [64], \"box\": [2]},\n\n"
                       " \"coefficients\": {\"V\": {}, \"Q\": {\"constant\": -1}}\n}"),
            4);
  // Non-integer periodic box.
  EXPECT_EQ(error_line("{\n \"grid\": {\"dim\": 1, \"cells\": [64], \"box\": [2.5]},\n"
                       " \"coefficients\": {\"V\": {}, \"Q\": {\"constant\": 1}}\n}"),
            2);
}

TEST(Config, ModeMismatchAndModeSpecificChecks) {
  std::string with_mode = kMinimal;
  with_mode.insert(1, "\"mode\": \"gausson\",");
  EXPECT_THROW(parse_config(with_mode, RunMode::Solve), ConfigError);
  EXPECT_THROW(parse_config(kMinimal, RunMode::Gausson), ConfigError); // periodic coefficients
  EXPECT_THROW(parse_config(kMinimal, RunMode::PSolve), ConfigError);  // no p
  EXPECT_NO_THROW(parse_config(kGausson, RunMode::Gausson));
}

TEST(Config, EchoRoundTrips) {
  for (const char *text : {kMinimal, kGausson}) {
    for (RunMode mode : {RunMode::Solve, RunMode::Gausson}) {
      if (mode == RunMode::Gausson && text == kMinimal)
        continue;
      const ExperimentConfig c = parse_config(text, mode);
      const json echo = to_json(c);
      const ExperimentConfig again = parse_config(echo.dump(), mode);
      EXPECT_EQ(to_json(again), echo);
    }
  }
}

TEST(Artifact, FormatDoubleIsExact) {
  for_all(200, 501, [](Gen &gen) {
    const double v = gen.uniform(-1, 1) * std::pow(10.0, gen.integer(-300, 300));
    const std::string s = format_double(v);
    EXPECT_EQ(std::strtod(s.c_str(), nullptr), v) << s;
  });
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(1.0), "1");
}

TEST(Artifact, CsvIsBitFaithful) {
  for (const Grid &g : {periodic_box8(), periodic_2d(16, 2.0)}) {
    Gen gen(7, 0);
    const Field a = gen.rough(g), b = gen.smooth(g);
    const std::string csv = field_csv({&a, &b}, {"a", "b"});
    const auto cols = parse_field_csv(csv, g.dim());
    ASSERT_EQ(cols.size(), 2u);
    EXPECT_EQ(Field(g, cols[0]), a);
    EXPECT_EQ(Field(g, cols[1]), b);
  }
}

TEST(Artifact, SerializeRoundTrip) {
  const ExperimentConfig c = parse_config(kMinimal, RunMode::Solve);
  const RunResult r = execute(c);
  const std::string once = serialize(r.report);
  EXPECT_EQ(serialize(json::parse(once)), once);
}

TEST(Diff, IdenticalAndEditedReports) {
  const ExperimentConfig c = parse_config(kMinimal, RunMode::Solve);
  const json a = execute(c).report;
  const json b = execute(c).report;
  EXPECT_TRUE(diff_reports(a, b).empty());

  json edited = a;
  edited["energy"]["j"] = a["energy"]["j"].get<double>() + 1e-3;
  const ReportDiff d = diff_reports(a, edited);
  ASSERT_EQ(d.entries.size(), 1u);
  EXPECT_EQ(d.entries[0].path, "/energy/j");

  // Within tolerance: identities differ by far less than 1e-8.
  json nudged = a;
  nudged["identities"]["relative_residual"] = a["identities"]["relative_residual"].get<double>() + 1e-12;
  EXPECT_TRUE(diff_reports(a, nudged).empty());
}

TEST(Diff, SeedChangeStaysInHistoryAndField) {
  ExperimentConfig c = parse_config(kMinimal, RunMode::Solve);
  const json a = execute(c).report;
  c.solver.seed = 12345;
  const json b = execute(c).report;
  const ReportDiff d = diff_reports(a, b);
  for (const DiffEntry &e : d.entries) {
    const bool allowed = e.path == "/config/solver/seed" ||
                         e.path.rfind("/solver/energy_history", 0) == 0 ||
                         e.path.rfind("/solver/energy_decrease", 0) == 0 ||
                         e.path == "/solver/iterations" ||
                         // ±u lie in one orbit; which sign a start lands on is seed dependent
                         e.path == "/solver/sign_pattern";
    EXPECT_TRUE(allowed) << e.path;
  }
}

TEST(Diff, SchemaMismatch) {
  const json a = {{"schema", kSchema}, {"mode", "solve"}};
  EXPECT_THROW(diff_reports(a, json{{"schema", "other/1"}, {"mode", "solve"}}), SchemaMismatch);
  EXPECT_THROW(diff_reports(a, json{{"schema", kSchema}, {"mode", "gausson"}}), SchemaMismatch);
  EXPECT_THROW(diff_reports(a, json::array()), SchemaMismatch);
}

TEST(Run, ExitCodesAndFiles) {
  std::ostringstream err;
  const auto dir = temp_dir("run");
  const auto cfg = dir.string() + ".json";
  {
    std::ofstream(cfg) << kGausson;
  }
  EXPECT_EQ(run(RunMode::Gausson, cfg, dir.string(), err), kConverged) << err.str();
  const json report = json::parse(slurp(dir / kReportFile));
  EXPECT_NEAR(report["energy"]["j"].get<double>(), 2.40897, 1e-3);
  EXPECT_TRUE(std::filesystem::exists(dir / kFieldFile));
  EXPECT_TRUE(std::filesystem::exists(dir / kTimingFile));

  // Malformed config: exit 1 and nothing written.
  const auto bad_dir = temp_dir("bad");
  {
    std::ofstream(cfg) << "{\n \"grid\": {\"dim\": 1, \"cells\": [64], \"box\": [2]},\n"
                          " \"coefficients\": {\"V\": {}}\n}";
  }
  err.str("");
  EXPECT_EQ(run(RunMode::Solve, cfg, bad_dir.string(), err), kConfigError);
  EXPECT_NE(err.str().find(":3:"), std::string::npos) << err.str();
  EXPECT_FALSE(std::filesystem::exists(bad_dir));

  // Non-convergence: exit 2 with the partial report.
  const auto partial = temp_dir("partial");
  {
    std::ofstream(cfg) << R"({"grid": {"dim": 1, "cells": [256], "box": [8]},
      "coefficients": {"V": {}, "Q": {"constant": 1}},
      "solver": {"max_iters": 1}})";
  }
  EXPECT_EQ(run(RunMode::Solve, cfg, partial.string(), err), kNotConverged);
  const json p = json::parse(slurp(partial / kReportFile));
  EXPECT_FALSE(p["solver"]["converged"].get<bool>());
  EXPECT_EQ(p["exit_code"], 2);
  std::filesystem::remove(cfg);
}

TEST(Run, ThreadsFromEnvironment) {
  ::setenv("LOGSOLVE_THREADS", "3", 1);
  EXPECT_EQ(threads_from_environment(), 3);
  ::setenv("LOGSOLVE_THREADS", "zero", 1);
  EXPECT_THROW(threads_from_environment(), ConfigError);
  ::setenv("LOGSOLVE_THREADS", "0", 1);
  EXPECT_THROW(threads_from_environment(), ConfigError);
  ::unsetenv("LOGSOLVE_THREADS");
  EXPECT_EQ(threads_from_environment(), 0);
}

TEST(Run, CheckLogSobMode) {
  const std::string text = R"({
    "grid": {"dim": 1, "cells": [512], "box": [16], "boundary": "dirichlet", "origin": [-8]},
    "coefficients": {"V": {}, "Q": {"constant": 1.0, "modes": [{"kind": "cos", "amplitude": 0.3, "frequency": [1]}]}},
    "logsob": {"fields": 100, "weighted_a": 0.3}
  })";
  const RunResult r = execute(parse_config(text, RunMode::CheckLogSob));
  EXPECT_EQ(r.exit_code, kConverged);
  EXPECT_GE(r.report["logsob"]["min_slack"].get<double>(), -1e-10);
  EXPECT_EQ(r.report["logsob"]["per_a"].size(), 5u);
}

TEST(Run, PSolveMode) {
  std::string text = kMinimal;
  text.insert(1, "\"p\": 3,");
  const RunResult r = execute(parse_config(text, RunMode::PSolve));
  EXPECT_EQ(r.exit_code, kConverged);
  EXPECT_LE(r.report["identities"]["p_identity_relative"].get<double>(), 1e-10);
}

TEST(Run, ReportsAreReproducible) {
  ExperimentConfig c = parse_config(kMinimal, RunMode::Multistart);
  c.solver.n_starts = 8;
  const RunResult a = execute(c, 1), b = execute(c, 2);
  EXPECT_EQ(serialize(a.report), serialize(b.report));
  EXPECT_EQ(a.csv, b.csv);
}
