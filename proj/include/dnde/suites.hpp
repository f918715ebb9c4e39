#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dnde/config.hpp"
#include "dnde/report.hpp"
#include "dnde/solver.hpp"

namespace dnde {

const std::vector<std::string>& suite_names();

/// Self-similar time scale for the config (1 when no source solution exists).
double config_time_scale(const Params& params);

/// Grid radius: explicit r_max, or the automatic rule for the initial kind.
double resolve_radius(const ExperimentConfig& config);

/// Initial state described by the config, on a fresh grid.
State config_initial_state(const ExperimentConfig& config);

/// Runs the config's evolution; records carry L1 errors for Barenblatt data.
std::vector<Snapshot> run_evolution(const ExperimentConfig& config);

/// Writes the CSV series (and optionally per-cell snapshots) into
/// config.output.dir; returns the series path.
std::string write_series(const ExperimentConfig& config, const std::string& stem,
                         const std::vector<Snapshot>& snapshots);

/// Runs one named suite and writes <dir>/<suite>_report.json.
Report run_suite(const std::string& name, const ExperimentConfig& config);

/// Report for a run that aborted: carries the message and a failing run_error check.
Report error_report(const std::string& suite, const ExperimentConfig& config, const std::string& message);

/// Reports in input order; a failing run is recorded, not propagated.
std::vector<Report> sweep(const std::vector<std::pair<std::string, ExperimentConfig>>& runs, unsigned jobs = 1);

/// Max relative residual of the radial A-norm decomposition over random tuples.
double a_norm_fuzz(std::size_t samples, unsigned long long seed);

/// Series-wide second-derivative mismatch max|fd - formula| / max|formula|.
double d2N_series_mismatch(const std::vector<Snapshot>& snapshots);

}  // namespace dnde
