#include "logsol/cli/artifact.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

namespace logsol::cli {

using nlohmann::json;

std::string format_double(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

std::string field_csv(const std::vector<const Field *> &fields,
                      const std::vector<std::string> &names) {
  if (fields.empty() || fields.size() != names.size())
    throw InvalidArgument("field_csv needs one name per field");
  const Grid &g = fields.front()->grid();
  for (const Field *f : fields)
    require_same_grid(g, f->grid());

  std::string out = g.dim() == 1 ? "x" : "x,y";
  for (const std::string &n : names)
    out += "," + n;
  out += "\n";
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    out += format_double(g.coordinate(idx, 0));
    if (g.dim() == 2)
      out += "," + format_double(g.coordinate(idx, 1));
    for (const Field *f : fields)
      out += "," + format_double((*f)[idx]);
    out += "\n";
  }
  return out;
}

std::vector<std::vector<double>> parse_field_csv(const std::string &text, int dim) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line))
    throw InvalidArgument("empty CSV");
  const auto columns = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',') + 1);
  const auto skip = static_cast<std::size_t>(dim);
  if (columns <= skip)
    throw InvalidArgument("CSV has no value columns");
  std::vector<std::vector<double>> values(columns - skip);
  while (std::getline(in, line)) {
    if (line.empty())
      continue;
    std::size_t col = 0;
    const char *p = line.data();
    const char *end = p + line.size();
    while (p <= end) {
      const char *comma = std::find(p, end, ',');
      if (col >= skip) {
        if (col >= columns)
          throw InvalidArgument("CSV row has too many columns");
        double v = 0.0;
        const auto r = std::from_chars(p, comma, v);
        if (r.ec != std::errc() || r.ptr != comma)
          throw InvalidArgument("bad CSV number: " + std::string(p, comma));
        values[col - skip].push_back(v);
      }
      ++col;
      p = comma + 1;
    }
    if (col != columns)
      throw InvalidArgument("CSV row has too few columns");
  }
  return values;
}

json to_json(const EnergyBreakdown &e) {
  return {{"j", e.j},
          {"phi", e.phi},
          {"psi", e.psi},
          {"quad", e.quad},
          {"logterm", e.logterm},
          {"nehari_residual", e.nehari_residual},
          {"q_mass", e.q_mass}};
}

json to_json(const SolverReport &r) {
  return {{"iterations", r.iterations},
          {"energy_history", r.energy_history},
          {"energy_decrease", r.energy_decrease},
          {"final_residual", r.final_residual},
          {"energy", r.energy},
          {"sign_pattern", to_string(r.sign_pattern)},
          {"converged", r.converged},
          {"termination", to_string(r.termination)}};
}

json to_json(const SolutionCheck &c) {
  return {{"relative_residual", c.relative_residual},
          {"nehari_relative", c.nehari_relative},
          {"level_relative", c.level_relative}};
}

std::string serialize(const json &report) { return report.dump(2) + "\n"; }

ToleranceTable default_tolerances() {
  return {{"/identities", {1e-8, 0.0}},
          {"/energy", {1e-10, 1e-8}},
          {"/solver/energy", {1e-10, 1e-8}},
          {"/solver/final_residual", {1e-8, 0.0}}};
}

namespace {

Tolerance tolerance_for(const std::string &path, const ToleranceTable &table) {
  Tolerance t;
  std::size_t best = 0;
  for (const auto &[prefix, tol] : table) {
    const bool match = path.compare(0, prefix.size(), prefix) == 0 &&
                       (path.size() == prefix.size() || path[prefix.size()] == '/');
    if (match && prefix.size() >= best) {
      best = prefix.size();
      t = tol;
    }
  }
  return t;
}

std::string escape(const std::string &key) {
  std::string out;
  for (char ch : key) {
    if (ch == '~')
      out += "~0";
    else if (ch == '/')
      out += "~1";
    else
      out += ch;
  }
  return out;
}

void walk(const json &a, const json &b, const std::string &path, const ToleranceTable &table,
          std::vector<DiffEntry> &out) {
  if (a.is_number() && b.is_number()) {
    const double x = a.get<double>(), y = b.get<double>();
    if (x == y || (std::isnan(x) && std::isnan(y)))
      return;
    const Tolerance t = tolerance_for(path, table);
    const double gap = std::abs(x - y);
    if (gap <= t.absolute || gap <= t.relative * std::max(std::abs(x), std::abs(y)))
      return;
    out.push_back({path, "value", a, b});
    return;
  }
  if (a.type() != b.type()) {
    out.push_back({path, "type", a, b});
    return;
  }
  if (a.is_object()) {
    for (auto it = a.begin(); it != a.end(); ++it) {
      const std::string p = path + "/" + escape(it.key());
      if (!b.contains(it.key()))
        out.push_back({p, "missing-right", it.value(), nullptr});
      else
        walk(it.value(), b.at(it.key()), p, table, out);
    }
    for (auto it = b.begin(); it != b.end(); ++it)
      if (!a.contains(it.key()))
        out.push_back({path + "/" + escape(it.key()), "missing-left", nullptr, it.value()});
    return;
  }
  if (a.is_array()) {
    if (a.size() != b.size())
      out.push_back({path, "length", a.size(), b.size()});
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i)
      walk(a[i], b[i], path + "/" + std::to_string(i), table, out);
    return;
  }
  if (a != b)
    out.push_back({path, "value", a, b});
}

json load_report(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw InvalidArgument("cannot open report " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error &e) {
    throw SchemaMismatch(path + " is not JSON: " + e.what());
  }
}

} // namespace

ReportDiff diff_reports(const json &a, const json &b, const ToleranceTable &tolerances) {
  for (const char *key : {"schema", "mode"}) {
    if (!a.is_object() || !b.is_object() || !a.contains(key) || !b.contains(key))
      throw SchemaMismatch(std::string("both reports need a \"") + key + "\" entry");
    if (a.at(key) != b.at(key))
      throw SchemaMismatch(std::string(key) + " " + a.at(key).dump() + " vs " + b.at(key).dump());
  }
  if (a.at("schema") != kSchema)
    throw SchemaMismatch("unknown schema " + a.at("schema").dump());
  ReportDiff d;
  walk(a, b, "", tolerances, d.entries);
  return d;
}

ReportDiff diff_reports(const std::string &a_path, const std::string &b_path,
                        const ToleranceTable &tolerances) {
  return diff_reports(load_report(a_path), load_report(b_path), tolerances);
}

json to_json(const ReportDiff &d) {
  json entries = json::array();
  for (const DiffEntry &e : d.entries)
    entries.push_back({{"path", e.path}, {"kind", e.kind}, {"left", e.left}, {"right", e.right}});
  return {{"identical", d.empty()}, {"entries", entries}};
}

} // namespace logsol::cli
