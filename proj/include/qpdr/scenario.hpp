#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "qpdr/errors.hpp"
#include "qpdr/liealg.hpp"

namespace qpdr {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";

// Schema violation; `pointer` is the JSON pointer of the offending value.
struct ConfigError : InputError {
  ConfigError(const std::string& pointer, const std::string& what)
      : InputError(pointer + ": " + what), pointer(pointer) {}
  std::string pointer;
};

struct LookupError : InputError {
  using InputError::InputError;
};

struct GridSpec {
  double from = -1.2;
  double to = 1.2;
  double step = 0.3;
  double exclude_abs_below = 0.0;
  std::vector<double> points() const;
};

struct ScenarioConfig {
  std::string id;
  std::string kind;
  Json algebra = "su2";  // preset name or inline definition
  Json params = Json::object();
  std::optional<GridSpec> grid;
  int samples = 0;  // random sample count
  std::optional<std::uint64_t> seed;
  double fd_step = 1e-5;
  bool richardson = false;
  Json tolerances = Json::object();  // check name or "default" -> tolerance
  std::string report_path;
  std::string triple_csv_path;
  std::string bracket_csv_path;

  double tolerance(const std::string& check, double fallback) const;
};

ScenarioConfig parse_config(const Json& j);
ScenarioConfig load_config(const std::string& path);
const std::vector<std::string>& scenario_kinds();

struct CheckRecord {
  std::string name;
  Json point;  // enough to re-run the sample in isolation
  double residual = 0;
  double tolerance = 0;
  bool pass = false;
  std::string reason;  // set when the sample could not be evaluated
};

struct TripleSample {
  double alpha = 0;
  Eigen::MatrixXd theta, r;
};

struct BracketSample {
  int point = 0, f = 0, h = 0;
  double value = 0;
};

struct DefectReport {
  std::string id;
  std::string kind;
  std::vector<CheckRecord> records;
  double fd_step = 0;
  std::optional<std::uint64_t> seed;
  std::string version = kVersion;
  std::string timestamp;
  std::vector<TripleSample> triples;
  std::vector<BracketSample> brackets;

  Json summary() const;  // max residual per check and overall pass
  bool pass() const;
};

DefectReport run_scenario(const ScenarioConfig& config);

enum class ReportFormat { Json, Csv, Md };
ReportFormat parse_format(const std::string& s);
std::string render_report(const DefectReport& report, ReportFormat format);
Json report_json(const DefectReport& report);
std::string triple_csv(const DefectReport& report);
std::string bracket_csv(const DefectReport& report);
// Writes through a temporary file and renames it into place.
void write_file_atomic(const std::string& path, const std::string& content);

QuadraticLieAlgebra algebra_from_config(const Json& algebra, const std::string& pointer = "/algebra");

}  // namespace qpdr
