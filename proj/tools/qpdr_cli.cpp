#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "qpdr/scenario.hpp"

namespace {

struct Overrides {
  std::optional<double> fd_step;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
};

void apply(qpdr::ScenarioConfig& c, const Overrides& o) {
  if (o.fd_step) {
    if (!(*o.fd_step > 0)) throw qpdr::ConfigError("/fd/step", "step must be positive");
    c.fd_step = *o.fd_step;
  }
  if (o.seed) c.seed = *o.seed;
  if (o.tol) {
    if (!(*o.tol > 0)) throw qpdr::ConfigError("/tolerances/default", "tolerance must be positive");
    c.tolerances = qpdr::Json{{"default", *o.tol}};
  }
}

qpdr::ScenarioConfig default_export_config(const std::string& what) {
  if (what == "triple")
    return qpdr::parse_config(qpdr::Json::parse(R"({
      "id": "su2_golden_export", "kind": "moduli_triple", "algebra": "su2",
      "params": {"section": "paper_su2"},
      "sampling": {"grid": {"from": -1.2, "to": 1.2, "step": 0.1, "exclude_abs_below": 0.05}}})"));
  return qpdr::parse_config(qpdr::Json::parse(R"({
      "id": "su2_fock_rosly_export", "kind": "fock_rosly", "algebra": "su2",
      "params": {"n": 2, "genus": 0, "r": "casimir", "functions": 3},
      "sampling": {"random": 5, "seed": 7}, "fd": {"step": 1e-3, "richardson": true}})"));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical verifier for quasi-Poisson reduction and dynamical r-matrices"};
  app.require_subcommand(1);
  Overrides ov;
  std::string format = "json";
  app.add_option("--fd-step", ov.fd_step, "finite-difference step");
  app.add_option("--seed", ov.seed, "random seed");
  app.add_option("--tol", ov.tol, "tolerance applied to every check");
  app.add_option("--format", format, "report format")->check(CLI::IsMember({"json", "csv", "md"}));

  auto* verify = app.add_subcommand("verify", "run a scenario config and report defects");
  verify->fallthrough();
  std::string config_path;
  verify->add_option("config", config_path, "scenario config (JSON)")->required();

  auto* exp = app.add_subcommand("export", "write sampled triples or bracket values as CSV");
  exp->fallthrough();
  std::string what, out_path, export_config;
  exp->add_option("--what", what, "triple or bracket")->required()->check(CLI::IsMember({"triple", "bracket"}));
  exp->add_option("--out", out_path, "output CSV path")->required();
  exp->add_option("--config", export_config, "scenario config to sample instead of the default");

  auto* list = app.add_subcommand("list-presets", "list algebra, section and scenario presets");
  list->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    if (list->parsed()) {
      qpdr::Json j;
      j["algebras"] = qpdr::algebra_preset_names();
      j["sections"] = {"paper_su2"};
      j["gauge_maps"] = {"exp_e1", "exp_e2", "exp_e3"};
      j["gspace_instances"] = {"kks_su2", "felder_su2"};
      j["scenario_kinds"] = qpdr::scenario_kinds();
      std::cout << j.dump(2) << "\n";
      return 0;
    }
    if (verify->parsed()) {
      qpdr::ScenarioConfig cfg = qpdr::load_config(config_path);
      apply(cfg, ov);
      const qpdr::DefectReport rep = qpdr::run_scenario(cfg);
      const qpdr::ReportFormat fmt = qpdr::parse_format(format);
      const std::string text = qpdr::render_report(rep, fmt);
      if (!cfg.report_path.empty()) qpdr::write_file_atomic(cfg.report_path, text);
      else std::cout << text;
      if (!cfg.triple_csv_path.empty()) qpdr::write_file_atomic(cfg.triple_csv_path, qpdr::triple_csv(rep));
      if (!cfg.bracket_csv_path.empty()) qpdr::write_file_atomic(cfg.bracket_csv_path, qpdr::bracket_csv(rep));
      return rep.pass() ? 0 : 1;
    }
    if (exp->parsed()) {
      qpdr::ScenarioConfig cfg =
          export_config.empty() ? default_export_config(what) : qpdr::load_config(export_config);
      apply(cfg, ov);
      const qpdr::DefectReport rep = qpdr::run_scenario(cfg);
      qpdr::write_file_atomic(out_path, what == "triple" ? qpdr::triple_csv(rep) : qpdr::bracket_csv(rep));
      return rep.pass() ? 0 : 1;
    }
  } catch (const qpdr::ConfigError& e) {
    std::cerr << "config error " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
