#include "support.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qpdr/scenario.hpp"

using namespace qpdr;
namespace fs = std::filesystem;

namespace {

Json golden_config() {
  return Json::parse(R"({"id":"g","kind":"moduli_triple","algebra":"su2","params":{"section":"paper_su2"},
    "sampling":{"grid":{"from":-0.9,"to":0.9,"step":0.3,"exclude_abs_below":0.05}},
    "tolerances":{"default":1e-6}})");
}

std::string pointer_of(const Json& j) {
  try {
    parse_config(j);
  } catch (const ConfigError& e) {
    return e.pointer;
  }
  return "<none>";
}

const char* env(const char* name) {
  const char* v = std::getenv(name);
  return v ? v : "";
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(env("QPDR_CLI")) + " " + args + " >/dev/null 2>&1";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

fs::path temp_path(const std::string& name) { return fs::temp_directory_path() / ("qpdr_test_" + name); }

}  // namespace

TEST(Config, ErrorsCarryPointer) {
  Json j = golden_config();
  j.erase("kind");
  EXPECT_EQ(pointer_of(j), "/kind");
  j = golden_config();
  j["kind"] = "nonsense";
  EXPECT_EQ(pointer_of(j), "/kind");
  j = golden_config();
  j["sampling"] = Json::parse(R"({"random":5})");
  EXPECT_EQ(pointer_of(j), "/sampling/seed");
  j["sampling"]["seed"] = -3;
  EXPECT_EQ(pointer_of(j), "/sampling/seed");
  EXPECT_EQ(pointer_of(golden_config()), "<none>");
}

TEST(Config, UnknownPresetIsLookupError) {
  Json j = golden_config();
  j["algebra"] = "e8";
  EXPECT_THROW(run_scenario(parse_config(j)), LookupError);
}

TEST(Config, MissingFileIsInputError) { EXPECT_THROW(load_config("/nonexistent/x.json"), InputError); }

TEST(Scenario, GoldenTripleCsv) {
  const DefectReport rep = run_scenario(parse_config(golden_config()));
  EXPECT_TRUE(rep.pass());
  std::istringstream in(triple_csv(rep));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "alpha,r_12,r_13,r_23,theta_1,theta_2,theta_3");
  int rows = 0;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> v;
    while (std::getline(ss, cell, ',')) v.push_back(std::stod(cell));
    ASSERT_EQ(v.size(), 7u);
    EXPECT_NEAR(v[1], std::tan(v[0]), 1e-12);
    ++rows;
  }
  EXPECT_EQ(rows, 6);  // 0 excluded
}

TEST(Scenario, AbelianIsExactlyZero) {
  const DefectReport rep = run_scenario(load_config(std::string(env("QPDR_SCENARIOS")) + "/abelian_quasi.json"));
  ASSERT_FALSE(rep.records.empty());
  for (const auto& r : rep.records) EXPECT_EQ(r.residual, 0.0) << r.name;
}

TEST(Scenario, ReducedBracketPasses) {
  const DefectReport rep = run_scenario(load_config(std::string(env("QPDR_SCENARIOS")) + "/su2_reduced.json"));
  EXPECT_TRUE(rep.pass());
  EXPECT_FALSE(rep.records.empty());
}

TEST(Scenario, EmptyReportRendersValidJson) {
  DefectReport rep;
  rep.id = "empty";
  const Json j = Json::parse(render_report(rep, ReportFormat::Json));
  EXPECT_TRUE(j["records"].is_array());
  EXPECT_TRUE(j["records"].empty());
  EXPECT_NO_THROW(render_report(rep, ReportFormat::Md));
  EXPECT_NO_THROW(render_report(rep, ReportFormat::Csv));
}

TEST(Scenario, Deterministic) {
  const ScenarioConfig c = load_config(std::string(env("QPDR_SCENARIOS")) + "/su2_quasi.json");
  Json a = report_json(run_scenario(c)), b = report_json(run_scenario(c));
  a.erase("timestamp");
  b.erase("timestamp");
  EXPECT_EQ(a.dump(), b.dump());
}

TEST(Scenario, AtomicWriteRejectsMissingDirectory) {
  EXPECT_THROW(write_file_atomic("/nonexistent/dir/out.csv", "x"), InputError);
  const fs::path p = temp_path("atomic.txt");
  write_file_atomic(p.string(), "hello");
  std::ifstream in(p);
  std::string s;
  std::getline(in, s);
  EXPECT_EQ(s, "hello");
  fs::remove(p);
}

TEST(Cli, EveryShippedScenarioVerifies) {
  ASSERT_TRUE(fs::exists(env("QPDR_CLI")));
  int n = 0;
  for (const auto& e : fs::directory_iterator(env("QPDR_SCENARIOS"))) {
    if (e.path().extension() != ".json" || e.path().stem() == "schema") continue;
    EXPECT_EQ(run_cli("verify " + e.path().string()), 0) << e.path();
    ++n;
  }
  EXPECT_GE(n, 8);
}

TEST(Cli, ListPresetsAndExport) {
  EXPECT_EQ(run_cli("list-presets"), 0);
  const fs::path out = temp_path("triple.csv");
  fs::remove(out);
  EXPECT_EQ(run_cli("export --what triple --out " + out.string()), 0);
  std::ifstream in(out);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "alpha,r_12,r_13,r_23,theta_1,theta_2,theta_3");
  fs::remove(out);
  EXPECT_EQ(run_cli("export --what bracket --out " + out.string()), 0);
  std::ifstream bin(out);
  std::getline(bin, header);
  EXPECT_EQ(header, "point,f,h,value");
  fs::remove(out);
}

TEST(Cli, BadConfigExitsTwo) {
  const fs::path p = temp_path("bad.json");
  std::ofstream(p) << R"({"id":"x","kind":"moduli_triple","sampling":{"random":3}})";
  EXPECT_EQ(run_cli("verify " + p.string()), 2);
  std::ofstream(p) << "{not json";
  EXPECT_EQ(run_cli("verify " + p.string()), 2);
  EXPECT_EQ(run_cli("verify /nonexistent.json"), 2);
  fs::remove(p);
}

TEST(Cli, FailingToleranceExitsNonZero) {
  const fs::path p = temp_path("strict.json");
  std::ofstream(p) << R"({"id":"s","kind":"reduced_bracket","algebra":"su2",
    "params":{"n":3,"genus":0,"section":"paper_su2","functions":3},"sampling":{"random":2,"seed":1}})";
  EXPECT_EQ(run_cli("verify --tol 1e-300 " + p.string()), 1);
  fs::remove(p);
}
