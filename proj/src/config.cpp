#include "dnde/config.hpp"

#include <cmath>
#include <fstream>

#include "dnde/error.hpp"

namespace dnde {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::ConfigError, path + ": " + what);
}

const json* child(const json& j, const char* key) {
  auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail(path, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) fail(path + "." + it.key(), "unknown key");
  }
}

double get_number(const json& j, const char* key, const std::string& path, double fallback) {
  const json* c = child(j, key);
  if (!c) return fallback;
  if (!c->is_number()) fail(path + "." + key, "expected a number");
  return c->get<double>();
}

std::size_t get_count(const json& j, const char* key, const std::string& path, std::size_t fallback) {
  const json* c = child(j, key);
  if (!c) return fallback;
  if (!c->is_number_integer() && !c->is_number_unsigned()) fail(path + "." + key, "expected an integer");
  const auto v = c->get<long long>();
  if (v < 0) fail(path + "." + key, "must be nonnegative");
  return static_cast<std::size_t>(v);
}

bool get_flag(const json& j, const char* key, const std::string& path, bool fallback) {
  const json* c = child(j, key);
  if (!c) return fallback;
  if (!c->is_boolean()) fail(path + "." + key, "expected true or false");
  return c->get<bool>();
}

std::optional<double> get_auto(const json& j, const char* key, const std::string& path,
                               std::optional<double> fallback) {
  const json* c = child(j, key);
  if (!c) return fallback;
  if (c->is_string()) {
    if (c->get<std::string>() != "auto") fail(path + "." + key, "expected a number or \"auto\"");
    return std::nullopt;
  }
  if (!c->is_number()) fail(path + "." + key, "expected a number or \"auto\"");
  return c->get<double>();
}

json auto_or(const std::optional<double>& v) { return v ? json(*v) : json("auto"); }

}  // namespace

const std::map<std::string, double>& default_tolerances() {
  static const std::map<std::string, double> table = {
      {"C_iso_two_forms", 1e-12},
      {"C_iso_quadrature", 0.01},
      {"a_sigma", 1e-14},
      {"A_norm_identity", 1e-10},
      {"mass", 1e-6},
      {"E_b", 0.005},
      {"q_moment", 0.005},
      {"I_b", 0.005},
      {"l1_error", 2e-3},
      {"convergence_order", 0.8},
      {"mass_conservation", 1e-10},
      {"pressure_residual", 0.05},
      {"max_residual", 0.02},
      {"dE_identity", 0.01},
      {"d2E_identity", 0.10},
      {"N_increasing", 0.0},
      {"N_second_difference", 0.01},
      {"N_linear_fit", 0.99999},
      {"Q_nonincreasing", 1e-3},
      {"Q_lower_bound", 0.98},
      {"Q_equals_C_iso", 0.01},
      {"J_limit", 0.05},
      {"S_classical", 1e-12},
      {"S_from_isoperimetric", 1e-10},
      {"sobolev_extremal", 1e-3},
      {"sobolev_gaussian", 1.01},
      {"sobolev_scaling", 1e-6},
      {"gn_extremal", 1e-3},
      {"gn_extremal_remainder", 1e-3},
      {"gn_exponent_two_forms", 1e-12},
      {"gn_gaussian", 0.0},
      {"d2N_mismatch", 0.10},
      {"d2N_refinement", 1.0},
      {"W_barenblatt_ratio", 1e-3},
      {"W_nonnegative", 1e-10},
      {"remainder_identity", 0.05},
      {"remainder_tail", 0.02},
      {"remainder_gn", 0.05},
  };
  return table;
}

double tolerance(const ExperimentConfig& config, const std::string& name) {
  if (auto it = config.tolerances.find(name); it != config.tolerances.end()) return it->second;
  const auto& d = default_tolerances();
  if (auto it = d.find(name); it != d.end()) return it->second;
  throw Error(ErrorKind::ConfigError, "no tolerance named '" + name + "'");
}

ExperimentConfig parse_config(const json& j) {
  check_keys(j, "config",
             {"dimension", "p", "gamma", "grid", "time", "init", "regularization", "output", "tolerances"});
  ExperimentConfig c;
  const json* dim = child(j, "dimension");
  if (!dim || !dim->is_number_integer()) fail("config.dimension", "required integer");
  c.dimension = dim->get<int>();
  if (!child(j, "p")) fail("config.p", "required");
  if (!child(j, "gamma")) fail("config.gamma", "required");
  c.p = get_number(j, "p", "config", 0.0);
  c.gamma = get_number(j, "gamma", "config", 0.0);

  if (const json* g = child(j, "grid")) {
    check_keys(*g, "config.grid", {"r_max", "cells"});
    c.grid.r_max = get_auto(*g, "r_max", "config.grid", c.grid.r_max);
    c.grid.cells = get_count(*g, "cells", "config.grid", c.grid.cells);
  }
  if (const json* t = child(j, "time")) {
    check_keys(*t, "config.time", {"t0", "t_end", "cfl", "max_steps", "save_every"});
    c.time.t0 = get_number(*t, "t0", "config.time", c.time.t0);
    c.time.t_end = get_number(*t, "t_end", "config.time", c.time.t_end);
    c.time.cfl = get_number(*t, "cfl", "config.time", c.time.cfl);
    c.time.max_steps = get_count(*t, "max_steps", "config.time", c.time.max_steps);
    c.time.save_every = get_count(*t, "save_every", "config.time", c.time.save_every);
  }
  if (const json* in = child(j, "init")) {
    check_keys(*in, "config.init", {"kind", "options"});
    if (const json* k = child(*in, "kind")) {
      if (!k->is_string()) fail("config.init.kind", "expected a string");
      c.init.kind = k->get<std::string>();
    }
    if (const json* o = child(*in, "options")) {
      if (!o->is_object()) fail("config.init.options", "expected an object");
      for (auto it = o->begin(); it != o->end(); ++it) {
        if (!it->is_number()) fail("config.init.options." + it.key(), "expected a number");
        c.init.options[it.key()] = it->get<double>();
      }
    }
  }
  if (const json* r = child(j, "regularization")) {
    check_keys(*r, "config.regularization", {"eps_rule", "u_floor_rule"});
    c.regularization.eps_rule = get_auto(*r, "eps_rule", "config.regularization", std::nullopt);
    c.regularization.u_floor_rule = get_auto(*r, "u_floor_rule", "config.regularization", std::nullopt);
  }
  if (const json* o = child(j, "output")) {
    check_keys(*o, "config.output", {"dir", "emit_csv", "emit_snapshots"});
    if (const json* d = child(*o, "dir")) {
      if (!d->is_string()) fail("config.output.dir", "expected a string");
      c.output.dir = d->get<std::string>();
    }
    c.output.emit_csv = get_flag(*o, "emit_csv", "config.output", c.output.emit_csv);
    c.output.emit_snapshots = get_flag(*o, "emit_snapshots", "config.output", c.output.emit_snapshots);
  }
  if (const json* t = child(j, "tolerances")) {
    if (!t->is_object()) fail("config.tolerances", "expected an object");
    const auto& known = default_tolerances();
    for (auto it = t->begin(); it != t->end(); ++it) {
      if (!known.count(it.key())) fail("config.tolerances." + it.key(), "unknown check name");
      if (!it->is_number()) fail("config.tolerances." + it.key(), "expected a number");
      c.tolerances[it.key()] = it->get<double>();
    }
  }
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ConfigError, "cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ConfigError, path + ": " + e.what());
  }
  return parse_config(j);
}

json to_json(const ExperimentConfig& c) {
  json j;
  j["dimension"] = c.dimension;
  j["p"] = c.p;
  j["gamma"] = c.gamma;
  j["grid"] = {{"r_max", auto_or(c.grid.r_max)}, {"cells", c.grid.cells}};
  j["time"] = {{"t0", c.time.t0},
               {"t_end", c.time.t_end},
               {"cfl", c.time.cfl},
               {"max_steps", c.time.max_steps},
               {"save_every", c.time.save_every}};
  json opts = json::object();
  for (const auto& [k, v] : c.init.options) opts[k] = v;
  j["init"] = {{"kind", c.init.kind}, {"options", opts}};
  j["regularization"] = {{"eps_rule", auto_or(c.regularization.eps_rule)},
                         {"u_floor_rule", auto_or(c.regularization.u_floor_rule)}};
  j["output"] = {{"dir", c.output.dir}, {"emit_csv", c.output.emit_csv}, {"emit_snapshots", c.output.emit_snapshots}};
  json tol = json::object();
  for (const auto& [k, v] : c.tolerances) tol[k] = v;
  j["tolerances"] = tol;
  return j;
}

void validate(const ExperimentConfig& c) {
  if (c.dimension < 1) fail("config.dimension", "must be >= 1");
  if (!(c.p > 1.0) || !std::isfinite(c.p)) fail("config.p", "must be finite and > 1");
  if (!std::isfinite(c.gamma)) fail("config.gamma", "must be finite");
  if (c.grid.r_max && !(*c.grid.r_max > 0.0)) fail("config.grid.r_max", "must be positive");
  if (c.grid.cells < 16) fail("config.grid.cells", "need at least 16 cells");
  if (!(c.time.t0 > 0.0)) fail("config.time.t0", "must be positive");
  if (!(c.time.t_end >= c.time.t0)) fail("config.time.t_end", "must not precede t0");
  if (!(c.time.cfl > 0.0 && c.time.cfl <= 1.0)) fail("config.time.cfl", "must lie in (0, 1]");
  if (c.time.max_steps == 0) fail("config.time.max_steps", "must be positive");
  if (c.time.save_every == 0) fail("config.time.save_every", "must be positive");
  static const char* kinds[] = {"barenblatt", "perturbed_barenblatt", "gaussian_bump", "double_bump"};
  bool kind_ok = false;
  for (const char* k : kinds) kind_ok = kind_ok || c.init.kind == k;
  if (!kind_ok) fail("config.init.kind", "unknown kind '" + c.init.kind + "'");
  for (const auto& [k, v] : c.init.options) {
    if (k != "amplitude" && k != "mode" && k != "width" && k != "separation") {
      fail("config.init.options." + k, "unknown option");
    }
    if (!std::isfinite(v)) fail("config.init.options." + k, "must be finite");
  }
  if (c.regularization.eps_rule && *c.regularization.eps_rule < 0.0) {
    fail("config.regularization.eps_rule", "must be >= 0");
  }
  if (c.regularization.u_floor_rule && *c.regularization.u_floor_rule < 0.0) {
    fail("config.regularization.u_floor_rule", "must be >= 0");
  }
  if (c.output.dir.empty()) fail("config.output.dir", "must not be empty");
  try {
    derive(c.dimension, c.p, c.gamma);
  } catch (const Error& e) {
    fail("config", e.what());
  }
}

Params config_params(const ExperimentConfig& c) { return derive(c.dimension, c.p, c.gamma); }

}  // namespace dnde
