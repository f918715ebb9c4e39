// dnde: command-line driver for the doubly nonlinear diffusion toolkit.
//
//   dnde constants --n 1 --p 2 --gamma 2
//   dnde barenblatt --n 3 --p 2 --gamma 0.75 --t 2
//   dnde evolve --config run.json --out out/
//   dnde verify concavity --config run.json --json
//   dnde sweep --config matrix.json --jobs 4

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "dnde/config.hpp"
#include "dnde/error.hpp"
#include "dnde/special_functions.hpp"
#include "dnde/suites.hpp"

using namespace dnde;
using nlohmann::json;

namespace {

enum Exit { kPass = 0, kCheckFailed = 1, kConfigError = 2, kNumericalAbort = 3 };

struct Globals {
  std::string config_path;
  std::string out_dir;
  bool json = false;
  std::optional<int> n;
  std::optional<double> p;
  std::optional<double> gamma;
};

ExperimentConfig resolve_config(const Globals& g) {
  ExperimentConfig c;
  if (!g.config_path.empty()) c = load_config(g.config_path);
  if (g.n) c.dimension = *g.n;
  if (g.p) c.p = *g.p;
  if (g.gamma) c.gamma = *g.gamma;
  if (!g.out_dir.empty()) c.output.dir = g.out_dir;
  validate(c);
  return c;
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

int cmd_constants(const Globals& g) {
  const ExperimentConfig c = resolve_config(g);
  const Params pr = config_params(c);
  const SharpConstants k = compute_constants(pr);
  json j = {{"params", params_json(pr)},
            {"D_b", k.D_b},
            {"C_profile", k.C_profile},
            {"C_iso", optional_json(k.C_iso)},
            {"S_sobolev", optional_json(k.S_sobolev)},
            {"gn_s", optional_json(k.gn_s)},
            {"gn_exponent", optional_json(k.gn_exponent)},
            {"C_gn", optional_json(k.C_gn)},
            {"time_scale", config_time_scale(pr)}};
  if (g.json) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << describe(pr) << "\n";
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (it.key() == "params") continue;
      std::cout << "  " << it.key() << " = " << it.value().dump() << "\n";
    }
  }
  return kPass;
}

int cmd_barenblatt(const Globals& g, double t, int points) {
  const ExperimentConfig c = resolve_config(g);
  const Params pr = config_params(c);
  const BarenblattSpec spec = make_barenblatt(pr);
  const ExactFunctionals ex = exact_functionals(spec, t);
  const double R = pr.b > 0.0 ? core_radius(spec, t) : tail_radius(spec, t, 1e-3);
  json samples = json::array();
  for (int i = 0; i < points; ++i) {
    const double r = points > 1 ? R * i / (points - 1) : 0.0;
    samples.push_back({{"r", r}, {"u", source_solution(spec, r, t)}});
  }
  json j = {{"params", params_json(pr)}, {"C", spec.C},          {"t", t},
            {"E_b", ex.E_b},             {"q_moment", ex.qmoment}, {"I_b", ex.I_b},
            {"N_b", ex.N_b},             {"Q_b", ex.Q_b},        {"profile", samples}};
  if (g.json) {
    std::cout << j.dump(2) << "\n";
    return kPass;
  }
  std::printf("%s  t=%g  C=%.12g\n", describe(pr).c_str(), t, spec.C);
  std::printf("  E_b=%.12g  q_moment=%.12g  I_b=%.12g  N_b=%.12g  Q_b=%.12g\n", ex.E_b, ex.qmoment, ex.I_b, ex.N_b,
              ex.Q_b);
  for (const auto& s : samples) std::printf("  r=%-12.6g u=%.12g\n", s["r"].get<double>(), s["u"].get<double>());
  return kPass;
}

int cmd_evolve(const Globals& g) {
  const ExperimentConfig c = resolve_config(g);
  const std::vector<Snapshot> snaps = run_evolution(c);
  const std::string series = write_series(c, "evolve", snaps);
  const DiagRecord& last = snaps.back().record;
  if (g.json) {
    json j = {{"series_file", series.empty() ? json(nullptr) : json(series)},
              {"records", snaps.size()},
              {"steps", snaps.back().state.steps},
              {"t", last.t},
              {"mass", last.mass},
              {"N_b", last.N_b},
              {"Q_b", last.Q_b},
              {"err_exact_l1", optional_json(last.err_exact_l1)}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::printf("%zu records, %zu steps, t=%g mass=%.12g Q_b=%.8g\n", snaps.size(), snaps.back().state.steps, last.t,
                last.mass, last.Q_b);
    if (!series.empty()) std::printf("series: %s\n", series.c_str());
  }
  return kPass;
}

void print_report(const Report& r, bool as_json) {
  if (as_json) {
    std::cout << to_json(r).dump(2) << "\n";
  } else {
    std::cout << format_report(r);
  }
}

int cmd_verify(const Globals& g, const std::string& suite) {
  const ExperimentConfig c = resolve_config(g);
  Report r;
  try {
    r = run_suite(suite, c);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ConfigError) throw;
    r = error_report(suite, c, e.what());
    print_report(r, g.json);
    return kNumericalAbort;
  }
  print_report(r, g.json);
  return r.pass() ? kPass : kCheckFailed;
}

// Sweep file: {"runs": [{"suite": "...", "config": {...}}, ...]}. A run's
// output dir defaults to <--out or "out">/<index>_<suite>.
int cmd_sweep(const Globals& g, unsigned jobs) {
  if (g.config_path.empty()) throw Error(ErrorKind::ConfigError, "sweep needs --config");
  std::ifstream in(g.config_path);
  if (!in) throw Error(ErrorKind::ConfigError, "cannot open " + g.config_path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ConfigError, g.config_path + ": " + e.what());
  }
  if (!j.is_object() || !j.contains("runs") || !j["runs"].is_array()) {
    throw Error(ErrorKind::ConfigError, "sweep: expected {\"runs\": [...]}");
  }
  const std::string base = g.out_dir.empty() ? "out" : g.out_dir;
  std::vector<std::pair<std::string, ExperimentConfig>> runs;
  for (std::size_t i = 0; i < j["runs"].size(); ++i) {
    const json& r = j["runs"][i];
    const std::string where = "runs[" + std::to_string(i) + "]";
    if (!r.is_object() || !r.contains("suite") || !r["suite"].is_string() || !r.contains("config")) {
      throw Error(ErrorKind::ConfigError, where + ": expected {\"suite\": str, \"config\": {...}}");
    }
    json cj = r["config"];
    const std::string suite = r["suite"].get<std::string>();
    if (!cj.contains("output") || !cj["output"].contains("dir")) {
      cj["output"]["dir"] = base + "/" + std::to_string(i) + "_" + suite;
    }
    try {
      runs.emplace_back(suite, parse_config(cj));
    } catch (const Error& e) {
      throw Error(ErrorKind::ConfigError, where + ": " + e.what());
    }
  }
  const std::vector<Report> reports = sweep(runs, jobs);
  bool all = true;
  bool aborted = false;
  json arr = json::array();
  for (const Report& r : reports) {
    all = all && r.pass();
    aborted = aborted || r.error.has_value();
    if (g.json) {
      arr.push_back(to_json(r));
    } else {
      std::cout << format_report(r);
    }
  }
  if (g.json) std::cout << arr.dump(2) << "\n";
  if (aborted) return kNumericalAbort;
  return all ? kPass : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Doubly nonlinear diffusion: sharp constants, solver and entropy diagnostics"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config_path, "Experiment config (JSON)");
  app.add_option("--out", g.out_dir, "Output directory (overrides the config)");
  app.add_flag("--json", g.json, "Machine-readable output");
  app.add_option("--n", g.n, "Dimension (overrides the config)");
  app.add_option("--p", g.p, "p-Laplacian exponent (overrides the config)");
  app.add_option("--gamma", g.gamma, "Power nonlinearity (overrides the config)");

  auto* constants = app.add_subcommand("constants", "Closed-form constants for (n, p, gamma)");
  double t = 1.0;
  int points = 11;
  auto* barenblatt = app.add_subcommand("barenblatt", "Barenblatt profile and its functionals");
  barenblatt->add_option("--t", t, "Label time")->check(CLI::PositiveNumber);
  barenblatt->add_option("--points", points, "Profile samples")->check(CLI::Range(1, 100000));
  auto* evolve_cmd = app.add_subcommand("evolve", "Run the solver and write the diagnostics series");
  std::string suite;
  auto* verify = app.add_subcommand("verify", "Run one verification suite");
  verify->add_option("suite", suite, "Suite name")->required()->check(CLI::IsMember(suite_names()));
  unsigned jobs = 1;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a list of suites, possibly concurrently");
  sweep_cmd->add_option("--jobs", jobs, "Concurrent runs")->check(CLI::PositiveNumber);

  // Global flags are accepted after the verb as well.
  for (CLI::App* sub : {constants, barenblatt, evolve_cmd, verify, sweep_cmd}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kConfigError;
  }

  try {
    if (*constants) return cmd_constants(g);
    if (*barenblatt) return cmd_barenblatt(g, t, points);
    if (*evolve_cmd) return cmd_evolve(g);
    if (*verify) return cmd_verify(g, suite);
    if (*sweep_cmd) return cmd_sweep(g, jobs);
  } catch (const Error& e) {
    std::cerr << "dnde: " << e.what() << "\n";
    return e.kind() == ErrorKind::ConfigError || e.kind() == ErrorKind::BadOption ? kConfigError : kNumericalAbort;
  } catch (const std::exception& e) {
    std::cerr << "dnde: " << e.what() << "\n";
    return kNumericalAbort;
  }
  return kConfigError;
}
