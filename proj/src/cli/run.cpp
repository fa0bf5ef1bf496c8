#include "logsol/cli/run.hpp"

#include "logsol/cli/artifact.hpp"
#include "logsol/nehari.hpp"
#include "logsol/parallel.hpp"
#include "logsol/plap.hpp"
#include "logsol/sampling.hpp"
#include "logsol/version.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>

namespace logsol::cli {

using nlohmann::json;

namespace {

Field initial_field(const ExperimentConfig &cfg, const Coefficients &c) {
  const Grid &g = c.grid();
  switch (cfg.initial.kind) {
  case InitialSpec::Kind::Bump:
    return gaussian_bump(g, cfg.initial.center, cfg.initial.amplitude, cfg.initial.sigma);
  case InitialSpec::Kind::Gausson: {
    Field u = gausson(cfg.coefficients.V.constant, cfg.coefficients.Q.constant, g);
    if (cfg.initial.perturbation != 0.0)
      u = u + cfg.initial.perturbation * random_smooth_field(g, cfg.solver.seed, 0);
    return u;
  }
  case InitialSpec::Kind::Random:
    break;
  }
  return random_initializer(c, cfg.solver, 0, Symmetry{});
}

double relative(double err, double scale) { return scale != 0.0 ? err / std::abs(scale) : err; }

json identities(const Field &u, const Coefficients &c, const SplitParams &p) {
  const EnergyBreakdown e = energy(u, c, p);
  json j = to_json(check_solution(u, c, p));
  j["splitting_relative"] = relative(std::abs(e.j - e.phi - e.psi), e.j);
  return j;
}

json sign_split_json(const Field &u, const Coefficients &c, const SplitParams &p) {
  const SignSplit s = sign_split(u, c, p);
  return {{"j", s.j}, {"j_plus", s.j_plus}, {"j_minus", s.j_minus}, {"crossing", s.crossing}};
}

json base_report(const ExperimentConfig &cfg) {
  return {{"schema", kSchema},
          {"version", kVersion},
          {"mode", to_string(cfg.mode)},
          {"config", to_json(cfg)}};
}

void run_solve(const ExperimentConfig &cfg, const Coefficients &c, RunResult &out) {
  const SplitParams p(cfg.split_delta);
  const Solution sol = descend(initial_field(cfg, c), c, p, cfg.solver);
  out.report["solver"] = to_json(sol.report);
  out.report["energy"] = to_json(energy(sol.u, c, p));
  out.report["identities"] = identities(sol.u, c, p);
  if (sol.report.sign_pattern == SignPattern::SignChanging)
    out.report["sign_split"] = sign_split_json(sol.u, c, p);
  out.report["field_csv"] = kFieldFile;
  out.csv = field_csv({&sol.u}, {"u"});
  out.exit_code = sol.report.converged ? kConverged : kNotConverged;
}

void run_multistart(const ExperimentConfig &cfg, const Coefficients &c, int threads,
                    RunResult &out) {
  const SplitParams p(cfg.split_delta);
  const MultistartResult r = multistart(c, p, cfg.solver, threads);

  json starts = json::array();
  std::vector<std::string> labels(r.solutions.size());
  for (const StartRecord &s : r.starts) {
    starts.push_back({{"index", s.index},
                      {"symmetry", s.symmetry.label()},
                      {"bumps", s.bumps},
                      {"converged", s.converged},
                      {"energy", s.energy},
                      {"iterations", s.iterations},
                      {"class", s.class_index}});
    if (s.class_index >= 0 && labels[static_cast<std::size_t>(s.class_index)].empty())
      labels[static_cast<std::size_t>(s.class_index)] = s.symmetry.label();
  }

  json solutions = json::array();
  std::vector<const Field *> fields;
  std::vector<std::string> names;
  for (std::size_t k = 0; k < r.solutions.size(); ++k) {
    const Solution &s = r.solutions[k];
    json entry = {{"column", "u" + std::to_string(k)},
                  {"found_in", labels[k]},
                  {"energy", to_json(energy(s.u, c, p))},
                  {"identities", identities(s.u, c, p)},
                  {"solver", to_json(s.report)}};
    if (s.report.sign_pattern == SignPattern::SignChanging) {
      json split = sign_split_json(s.u, c, p);
      split["ground_state_energy"] = r.solutions.front().report.energy;
      entry["sign_split"] = split;
    }
    solutions.push_back(entry);
    fields.push_back(&s.u);
    names.push_back("u" + std::to_string(k));
  }

  json distances = json::array();
  const int step = c.descriptor().is_constant() && c.grid().periodic() ? 1 : 0;
  for (std::size_t a = 0; a < r.solutions.size(); ++a)
    for (std::size_t b = a + 1; b < r.solutions.size(); ++b)
      distances.push_back(
          {{"a", a}, {"b", b}, {"orbit_distance", orbit_distance(r.solutions[a].u, r.solutions[b].u, step)}});

  out.report["starts"] = starts;
  out.report["solutions"] = solutions;
  out.report["orbit_distances"] = distances;
  out.report["classes"] = r.solutions.size();
  if (!r.solutions.empty()) {
    out.report["ground_state"] = {{"energy", r.solutions.front().report.energy},
                                  {"sign_pattern", to_string(r.solutions.front().report.sign_pattern)}};
    out.report["energy"] = to_json(energy(r.solutions.front().u, c, p));
    out.report["field_csv"] = kFieldFile;
    out.csv = field_csv(fields, names);
  }
  out.exit_code = r.solutions.empty() ? kNotConverged : kConverged;
}

void run_gausson(const ExperimentConfig &cfg, const Coefficients &c, RunResult &out) {
  const SplitParams p(cfg.split_delta);
  const Grid &g = c.grid();
  const double v0 = cfg.coefficients.V.constant, q0 = cfg.coefficients.Q.constant;
  const Field exact = gausson(v0, q0, g);
  const GaussonParams gp = gausson_params(v0, q0, g.dim());
  // ½∫Q G² = ½ Q e^{2a} (π/Q)^{N/2}
  const double continuum = 0.5 * q0 * std::exp(2.0 * gp.amplitude_exponent) *
                           std::pow(std::numbers::pi / q0, 0.5 * g.dim());

  const Solution sol = descend(initial_field(cfg, c), c, p, cfg.solver);
  const double error = std::min(l2_norm(sol.u - exact), l2_norm(sol.u + exact));
  out.report["solver"] = to_json(sol.report);
  out.report["energy"] = to_json(energy(sol.u, c, p));
  out.report["identities"] = identities(sol.u, c, p);
  out.report["gausson"] = {{"amplitude_exponent", gp.amplitude_exponent},
                           {"width", gp.width},
                           {"peak", std::exp(gp.amplitude_exponent)},
                           {"continuum_energy", continuum},
                           {"sampled_energy", energy(exact, c, p).j},
                           {"l2_error", error},
                           {"energy_error", std::abs(sol.report.energy - continuum)}};
  out.report["field_csv"] = kFieldFile;
  out.csv = field_csv({&sol.u, &exact}, {"u", "gausson"});
  out.exit_code = sol.report.converged ? kConverged : kNotConverged;
}

void run_check_logsob(const ExperimentConfig &cfg, const Coefficients &c, RunResult &out) {
  const Grid &g = c.grid();
  const LogSobSpec &ls = cfg.logsob;
  std::vector<double> min_slack(ls.a.size(), std::numeric_limits<double>::infinity());
  std::vector<int> argmin(ls.a.size(), -1);
  double weighted_min = std::numeric_limits<double>::infinity();
  double overall = std::numeric_limits<double>::infinity();
  int worst_field = 0;
  for (int i = 0; i < ls.fields; ++i) {
    const Field u = random_smooth_field(g, cfg.solver.seed, static_cast<std::uint64_t>(i));
    for (std::size_t k = 0; k < ls.a.size(); ++k) {
      const double s = logsob_slack(u, ls.a[k]);
      if (s < min_slack[k]) {
        min_slack[k] = s;
        argmin[k] = i;
      }
      if (s < overall) {
        overall = s;
        worst_field = i;
      }
    }
    if (ls.weighted_a)
      weighted_min = std::min(weighted_min, weighted_logsob_bound(u, c, *ls.weighted_a) -
                                                weighted_logsob_lhs(u, c));
  }
  json per_a = json::array();
  for (std::size_t k = 0; k < ls.a.size(); ++k)
    per_a.push_back({{"a", ls.a[k]}, {"min_slack", min_slack[k]}, {"field", argmin[k]}});
  bool holds = overall >= -ls.tolerance;
  json report = {{"fields", ls.fields}, {"per_a", per_a}, {"min_slack", overall},
                 {"worst_field", worst_field}, {"tolerance", ls.tolerance}};
  if (ls.weighted_a) {
    report["weighted"] = {{"a", *ls.weighted_a}, {"min_slack", weighted_min}};
    holds = holds && weighted_min >= -ls.tolerance;
  }
  report["holds"] = holds;
  out.report["logsob"] = report;
  const Field worst = random_smooth_field(g, cfg.solver.seed, static_cast<std::uint64_t>(worst_field));
  out.report["field_csv"] = kFieldFile;
  out.csv = field_csv({&worst}, {"u"});
  out.exit_code = holds ? kConverged : kNotConverged;
}

void run_p_solve(const ExperimentConfig &cfg, const Coefficients &c, RunResult &out) {
  const PLapParams pp(*cfg.p);
  const PLapObjective objective(c, pp);
  std::optional<RieszMap> riesz;
  if (cfg.solver.preconditioner == Preconditioner::H1)
    riesz.emplace(c);
  const Solution sol = descend(initial_field(cfg, c), objective, cfg.solver, riesz ? &*riesz : nullptr);
  const PLapBreakdown b = plap_breakdown(sol.u, c, pp);
  out.report["solver"] = to_json(sol.report);
  out.report["energy"] = {{"j", b.j},
                          {"quad", b.quad},
                          {"logterm", b.logterm},
                          {"q_mass", b.q_mass},
                          {"nehari_residual", b.nehari_residual}};
  out.report["identities"] = {
      {"relative_residual", l2_norm(plap_gradient(sol.u, c, pp)) / std::pow(b.quad, 1.0 / pp.p())},
      {"nehari_relative", relative(std::abs(b.nehari_residual), b.quad)},
      {"p_identity_relative", relative(std::abs(pp.p() * b.j - b.nehari_residual - b.q_mass), b.q_mass)}};
  out.report["field_csv"] = kFieldFile;
  out.csv = field_csv({&sol.u}, {"u"});
  out.exit_code = sol.report.converged ? kConverged : kNotConverged;
}

void write_file(const std::filesystem::path &path, const std::string &text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  f << text;
  if (!f)
    throw std::runtime_error("cannot write " + path.string());
}

} // namespace

RunResult execute(const ExperimentConfig &config, int threads) {
  const auto t0 = std::chrono::steady_clock::now();
  RunResult out;
  out.report = base_report(config);
  try {
    const Coefficients c = make_coefficients(config.coefficients, config.grid());
    switch (config.mode) {
    case RunMode::Solve:
      run_solve(config, c, out);
      break;
    case RunMode::Multistart:
      run_multistart(config, c, threads, out);
      break;
    case RunMode::Gausson:
      run_gausson(config, c, out);
      break;
    case RunMode::CheckLogSob:
      run_check_logsob(config, c, out);
      break;
    case RunMode::PSolve:
      run_p_solve(config, c, out);
      break;
    }
  } catch (const Error &e) {
    out.report["error"] = e.what();
    out.exit_code = kNotConverged;
  }
  out.report["exit_code"] = out.exit_code;
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

int threads_from_environment() {
  const char *raw = std::getenv("LOGSOLVE_THREADS");
  if (raw == nullptr || *raw == '\0')
    return 0;
  const std::string_view text(raw);
  int n = 0;
  const auto r = std::from_chars(text.data(), text.data() + text.size(), n);
  if (r.ec != std::errc() || r.ptr != text.data() + text.size() || n <= 0)
    throw ConfigError(0, "LOGSOLVE_THREADS must be a positive integer, got \"" + std::string(text) + "\"");
  return n;
}

int run(RunMode mode, const std::string &config_path, const std::string &out_dir, std::ostream &err) {
  ExperimentConfig config;
  int threads = 0;
  try {
    config = load_config(config_path, mode);
    threads = threads_from_environment();
  } catch (const ConfigError &e) {
    if (e.line() > 0)
      err << config_path << ":" << e.line() << ": ";
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }

  const RunResult result = execute(config, threads);
  try {
    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    write_file(dir / kReportFile, serialize(result.report));
    if (!result.csv.empty())
      write_file(dir / kFieldFile, result.csv);
    const json timing = {{"wall_seconds", result.wall_seconds},
                         {"threads", threads > 0 ? threads : par::max_threads()}};
    write_file(dir / kTimingFile, serialize(timing));
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return kNotConverged;
  }
  if (result.report.contains("error"))
    err << "error: " << result.report.at("error").get<std::string>() << "\n";
  return result.exit_code;
}

} // namespace logsol::cli
