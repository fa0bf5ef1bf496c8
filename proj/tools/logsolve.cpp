// logsolve: command-line front end for the logarithmic Schrödinger solvers.
//
//   logsolve <solve|multistart|gausson|check-logsob|p-solve> --config <path> --out <dir>
//   logsolve diff <report-a> <report-b>
//
// Exit codes: 0 converged (or reports identical), 1 configuration error,
// 2 not converged (partial report written) or reports differ.

#include "logsol/cli/artifact.hpp"
#include "logsol/cli/run.hpp"
#include "logsol/version.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char **argv) {
  using namespace logsol::cli;

  CLI::App app{"Ground states and multiplicity for -Δu + V u = Q u log u²"};
  app.set_version_flag("--version", logsol::kVersion);
  app.require_subcommand(1);

  std::string config_path, out_dir;
  for (RunMode mode : {RunMode::Solve, RunMode::Multistart, RunMode::Gausson, RunMode::CheckLogSob,
                       RunMode::PSolve}) {
    CLI::App *sub = app.add_subcommand(to_string(mode));
    sub->add_option("--config", config_path, "JSON experiment config")->required();
    sub->add_option("--out", out_dir, "output directory")->required();
  }
  std::string left, right;
  CLI::App *diff = app.add_subcommand("diff", "compare two report.json files");
  diff->add_option("a", left)->required();
  diff->add_option("b", right)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kConfigError;
  }

  CLI::App *chosen = app.get_subcommands().front();
  if (chosen == diff) {
    try {
      const ReportDiff d = diff_reports(left, right);
      std::cout << to_json(d).dump(2) << "\n";
      return d.empty() ? 0 : 2;
    } catch (const std::exception &e) {
      std::cerr << "error: " << e.what() << "\n";
      return kConfigError;
    }
  }
  return run(*parse_mode(chosen->get_name()), config_path, out_dir, std::cerr);
}
