#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "dnde/params.hpp"

namespace dnde {

/// One experiment. Times are in units of the self-similar time scale tau
/// (see time_scale), so that t0 = 1 starts a Barenblatt run at U_{b,1}.
struct ExperimentConfig {
  int dimension = 1;
  double p = 2.0;
  double gamma = 2.0;

  struct Grid {
    std::optional<double> r_max;  // empty = "auto"
    std::size_t cells = 2000;
    bool operator==(const Grid&) const = default;
  } grid;

  struct Time {
    double t0 = 1.0;
    double t_end = 2.0;
    double cfl = 0.25;
    std::size_t max_steps = 50'000'000;
    std::size_t save_every = 20;
    bool operator==(const Time&) const = default;
  } time;

  struct Init {
    std::string kind = "barenblatt";
    std::map<std::string, double> options;
    bool operator==(const Init&) const = default;
  } init;

  struct Regularization {
    std::optional<double> eps_rule;      // empty = "auto"
    std::optional<double> u_floor_rule;  // empty = "auto"
    bool operator==(const Regularization&) const = default;
  } regularization;

  struct Output {
    std::string dir = "out";
    bool emit_csv = true;
    bool emit_snapshots = false;
    bool operator==(const Output&) const = default;
  } output;

  std::map<std::string, double> tolerances;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Default tolerance for every named check.
const std::map<std::string, double>& default_tolerances();

/// Tolerance for a check: config override or the documented default.
double tolerance(const ExperimentConfig& config, const std::string& name);

/// Parses and validates; throws Error(ConfigError) with a path-qualified message.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);
nlohmann::json to_json(const ExperimentConfig& config);

/// Throws Error(ConfigError) for inconsistent values.
void validate(const ExperimentConfig& config);

Params config_params(const ExperimentConfig& config);

}  // namespace dnde
