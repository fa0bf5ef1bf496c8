#pragma once

#include "logsol/energy.hpp"
#include "logsol/errors.hpp"
#include "logsol/solver.hpp"

#include <json.hpp>

#include <map>
#include <string>
#include <vector>

namespace logsol::cli {

inline constexpr const char *kSchema = "logsolve.run/1";

/// 17 significant digits (the %.17g form), locale independent, so parsing
/// the text recovers the double exactly.
std::string format_double(double v);

/// CSV with one coordinate column per axis followed by one column per field.
std::string field_csv(const std::vector<const Field *> &fields,
                      const std::vector<std::string> &names);
/// Parses the value columns of a field_csv dump (coordinates are skipped).
std::vector<std::vector<double>> parse_field_csv(const std::string &text, int dim);

nlohmann::json to_json(const EnergyBreakdown &e);
nlohmann::json to_json(const SolverReport &r);
nlohmann::json to_json(const SolutionCheck &c);

/// Canonical text form of a report: sorted keys, two-space indent, trailing
/// newline. serialize(parse(serialize(j))) == serialize(j).
std::string serialize(const nlohmann::json &report);

class SchemaMismatch : public Error {
public:
  explicit SchemaMismatch(const std::string &what) : Error("schema mismatch: " + what) {}
};

struct Tolerance {
  double absolute = 0.0;
  double relative = 0.0;
};

/// Tolerances keyed by JSON pointer prefix; the longest matching prefix wins
/// and unlisted numbers must agree exactly.
using ToleranceTable = std::map<std::string, Tolerance>;
ToleranceTable default_tolerances();

struct DiffEntry {
  std::string path;
  std::string kind; ///< "value", "type", "missing-left", "missing-right", "length"
  nlohmann::json left;
  nlohmann::json right;
};

struct ReportDiff {
  std::vector<DiffEntry> entries;
  bool empty() const { return entries.empty(); }
};

/// Field-by-field comparison; numbers within their tolerance do not count.
/// Throws SchemaMismatch unless both carry the same "schema" and "mode".
ReportDiff diff_reports(const nlohmann::json &a, const nlohmann::json &b,
                        const ToleranceTable &tolerances = default_tolerances());
ReportDiff diff_reports(const std::string &a_path, const std::string &b_path,
                        const ToleranceTable &tolerances = default_tolerances());

nlohmann::json to_json(const ReportDiff &d);

} // namespace logsol::cli
