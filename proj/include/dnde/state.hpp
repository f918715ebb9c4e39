#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "dnde/params.hpp"
#include "dnde/radial_grid.hpp"

namespace dnde {

/// Nonnegative radial density on a grid at time t.
struct State {
  Params params;
  std::shared_ptr<const RadialGrid> grid;
  std::vector<double> u;
  double t = 0.0;
  double eps = 0.0;      // regularisation of |grad u^gamma|^{p-2}, frozen at t0
  double u_floor = 0.0;  // guard for negative powers of u; never added to u
  double clamped_mass = 0.0;
  std::size_t steps = 0;
};

double mass(const State& state);

}  // namespace dnde
