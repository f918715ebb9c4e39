#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dnde/barenblatt.hpp"
#include "dnde/functionals.hpp"
#include "dnde/state.hpp"

namespace dnde {

enum class InitKind { Barenblatt, PerturbedBarenblatt, GaussianBump, DoubleBump };

const char* to_string(InitKind kind);
InitKind parse_init_kind(const std::string& name);

struct InitOptions {
  double t0 = 1.0;          // physical start time; Barenblatt data are U at this time
  double amplitude = 0.05;  // perturbed_barenblatt
  int mode = 2;             // perturbed_barenblatt
  double width = 1.0;       // gaussian_bump, double_bump
  double separation = 2.0;  // double_bump: radius of the outer ring
  std::optional<double> eps;      // default 1e-6 max|grad u0^gamma|
  std::optional<double> u_floor;  // default 1e-12 max u0
};

/// Cell-averaged initial density with unit mass.
State initial_condition(InitKind kind, const Params& params, std::shared_ptr<const RadialGrid> grid,
                        const InitOptions& options = {});

/// Wraps an arbitrary nonnegative density (normalised to unit mass) with the
/// automatic regularisation rules.
State state_from_density(const Params& params, std::shared_ptr<const RadialGrid> grid, std::vector<double> u,
                         double t, std::optional<double> eps = {}, std::optional<double> u_floor = {});

/// Explicit-Euler stable step cfl * dr^2 / max_i D_i.
double cfl_dt(const State& state, double cfl);

/// One conservative explicit step with zero-flux walls.
void advance(State& state, double dt);
State step(const State& state, double dt);

struct EvolveOptions {
  double t_end = 1.0;
  std::size_t save_every = 10;  // number of uniform save intervals on [t0, t_end]
  double cfl = 0.25;
  std::size_t max_steps = 50'000'000;
  /// When set, records carry the L1 distance to the exact solution.
  std::optional<BarenblattSpec> reference;
};

struct Snapshot {
  State state;
  DiagRecord record;
};

std::vector<Snapshot> evolve(State state, const EvolveOptions& options);

/// L1 distance on the ball between u and the cell averages of the exact
/// solution at state.t.
double l1_error(const State& state, const BarenblattSpec& spec);

/// Residual of dv/dt = b v Delta_p v + |grad v|^p between two states of one
/// run, normalised by max |dv/dt|.
double pressure_residual(const State& prev, const State& next);

/// Radius used for runs that start from or relax towards a Barenblatt
/// solution up to physical time t_end.
double auto_radius(const BarenblattSpec& spec, double t_end);

}  // namespace dnde
