#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "dnde/config.hpp"
#include "dnde/error.hpp"
#include "dnde/report.hpp"

using namespace dnde;
using nlohmann::json;

namespace {

ErrorKind kind_of(const json& j) {
  try {
    parse_config(j);
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::BadOption;
}

std::string message_of(const json& j) {
  try {
    parse_config(j);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("minimal config takes the documented defaults") {
  const ExperimentConfig c = parse_config(json{{"dimension", 3}, {"p", 2.0}, {"gamma", 0.75}});
  CHECK(c.grid.cells == 2000);
  CHECK_FALSE(c.grid.r_max.has_value());
  CHECK(c.time.t0 == 1.0);
  CHECK(c.time.t_end == 2.0);
  CHECK(c.init.kind == "barenblatt");
  CHECK(c.output.emit_csv);
  CHECK(tolerance(c, "l1_error") == 2e-3);
  CHECK(tolerance(c, "max_residual") == 0.02);
  CHECK(tolerance(c, "d2N_mismatch") == 0.1);
  CHECK_THROWS_AS(tolerance(c, "no_such_check"), Error);
}

TEST_CASE("parse and serialise round trip") {
  const json j = {
      {"dimension", 3},
      {"p", 3.0},
      {"gamma", 1.0},
      {"grid", {{"r_max", 4.5}, {"cells", 1234}}},
      {"time", {{"t0", 1.5}, {"t_end", 3.0}, {"cfl", 0.2}, {"max_steps", 1000000}, {"save_every", 12}}},
      {"init", {{"kind", "double_bump"}, {"options", {{"width", 0.5}, {"separation", 3.0}}}}},
      {"regularization", {{"eps_rule", "auto"}, {"u_floor_rule", 1e-14}}},
      {"output", {{"dir", "runs/a"}, {"emit_csv", false}, {"emit_snapshots", true}}},
      {"tolerances", {{"l1_error", 1e-3}}},
  };
  const ExperimentConfig c = parse_config(j);
  CHECK(*c.grid.r_max == 4.5);
  CHECK(*c.regularization.u_floor_rule == 1e-14);
  CHECK_FALSE(c.regularization.eps_rule.has_value());
  CHECK(tolerance(c, "l1_error") == 1e-3);
  const json out = to_json(c);
  CHECK(parse_config(out) == c);
  CHECK(to_json(parse_config(out)) == out);
  CHECK(out["regularization"]["eps_rule"] == "auto");
}

TEST_CASE("defaults round trip") {
  const ExperimentConfig c = parse_config(json{{"dimension", 1}, {"p", 2.0}, {"gamma", 2.0}});
  CHECK(parse_config(to_json(c)) == c);
}

TEST_CASE("config errors carry the offending path") {
  const json base = {{"dimension", 1}, {"p", 2.0}, {"gamma", 2.0}};
  json j = base;
  j["grid"] = {{"cels", 10}};
  CHECK(kind_of(j) == ErrorKind::ConfigError);
  CHECK(message_of(j).find("config.grid.cels") != std::string::npos);

  j = base;
  j.erase("gamma");
  CHECK(message_of(j).find("config.gamma") != std::string::npos);

  j = base;
  j["grid"] = {{"r_max", "big"}};
  CHECK(kind_of(j) == ErrorKind::ConfigError);

  j = base;
  j["time"] = {{"t0", 2.0}, {"t_end", 1.0}};
  CHECK(message_of(j).find("t_end") != std::string::npos);

  j = base;
  j["init"] = {{"kind", "ring"}};
  CHECK(kind_of(j) == ErrorKind::ConfigError);

  j = base;
  j["init"] = {{"kind", "gaussian_bump"}, {"options", {{"radius", 1.0}}}};
  CHECK(message_of(j).find("config.init.options.radius") != std::string::npos);

  j = base;
  j["tolerances"] = {{"made_up", 1.0}};
  CHECK(kind_of(j) == ErrorKind::ConfigError);

  j = base;
  j["gamma"] = 1.0;  // b = 0
  CHECK(kind_of(j) == ErrorKind::ConfigError);

  j = base;
  j["grid"] = {{"cells", 4}};
  CHECK(kind_of(j) == ErrorKind::ConfigError);

  CHECK(kind_of(json::array()) == ErrorKind::ConfigError);
}

TEST_CASE("loading from disk") {
  const auto path = std::filesystem::temp_directory_path() / "dnde_config_test.json";
  {
    std::ofstream out(path);
    out << R"({"dimension": 3, "p": 2, "gamma": 2, "grid": {"cells": 500}})";
  }
  CHECK(load_config(path.string()).grid.cells == 500);
  {
    std::ofstream out(path);
    out << "{ not json";
  }
  CHECK_THROWS_AS(load_config(path.string()), Error);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_config(path.string()), Error);
}

TEST_CASE("report JSON schema") {
  Report r;
  r.suite = "constants";
  r.params = derive(1, 2.0, 2.0);
  r.checks.push_back(relative_check("a_sigma", 1.0, 1.0, 1e-14, "derived exponents"));
  r.checks.push_back(upper_check("l1_error", NAN, 0.0, 2e-3, "self-similar source solution"));
  const json j = to_json(r);
  CHECK(j["suite"] == "constants");
  CHECK(j["params"]["sigma"] == -3.0);
  CHECK(j["params"]["regime"] == "SlowDiffusion");
  CHECK(j["checks"].size() == 2);
  CHECK(j["checks"][1]["value"].is_null());
  CHECK(j["checks"][1]["pass"] == false);
  CHECK(j["series_file"].is_null());
  CHECK(j.contains("wallclock_s"));
  CHECK_FALSE(j.contains("error"));
  for (const auto& c : j["checks"]) {
    for (const char* k : {"name", "value", "expected", "tolerance", "pass", "paper_anchor"}) CHECK(c.contains(k));
  }
  CHECK_FALSE(r.pass());
  r.checks.pop_back();
  CHECK(r.pass());
  r.error = "NonFiniteState: boom";
  CHECK_FALSE(r.pass());
  CHECK(to_json(r)["error"] == "NonFiniteState: boom");
}

TEST_CASE("check builders") {
  CHECK(relative_check("x", 1.009, 1.0, 0.01, "a").pass);
  CHECK_FALSE(relative_check("x", 1.011, 1.0, 0.01, "a").pass);
  CHECK(absolute_check("x", 0.5, 0.0, 0.5, "a").pass);
  CHECK(upper_check("x", 0.01, 0.0, 0.02, "a").pass);
  CHECK_FALSE(upper_check("x", NAN, 0.0, 0.02, "a").pass);
  CHECK(lower_check("x", 1.02, 1.0, 1.01, "a").pass);
  CHECK_FALSE(lower_check("x", NAN, 1.0, 1.01, "a").pass);
}
