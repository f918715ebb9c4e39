#include "dnde/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dnde/error.hpp"

namespace dnde {
namespace {

std::vector<double> power_field(const std::vector<double>& u, double e) {
  std::vector<double> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = u[i] > 0.0 ? std::pow(u[i], e) : 0.0;
  return out;
}

void normalise(const RadialGrid& grid, std::vector<double>& u) {
  const double total = integrate(grid, u);
  if (!(total > 0.0) || !std::isfinite(total)) throw Error(ErrorKind::EmptyDensity, "initial density has no mass");
  for (double& x : u) x /= total;
}

void require_state(const State& state) {
  if (!state.grid) throw Error(ErrorKind::BadMesh, "state has no grid");
  if (state.u.size() != state.grid->m) throw Error(ErrorKind::LengthMismatch, "state length differs from grid");
}

// u^e with exact shortcuts for the exponents that occur most often.
class PowerFn {
 public:
  explicit PowerFn(double e) : e_(e) {
    if (e == 1.0) kind_ = 1;
    else if (e == 2.0) kind_ = 2;
    else if (e == 0.5) kind_ = 3;
    else if (e == 0.75) kind_ = 4;
    else if (e == 1.5) kind_ = 5;
    else if (e == 3.0) kind_ = 6;
  }
  double operator()(double u) const {
    if (!(u > 0.0)) return 0.0;
    switch (kind_) {
      case 1: return u;
      case 2: return u * u;
      case 3: return std::sqrt(u);
      case 4: return std::sqrt(u * std::sqrt(u));
      case 5: return u * std::sqrt(u);
      case 6: return u * u * u;
      default: return std::pow(u, e_);
    }
  }

 private:
  double e_;
  int kind_ = 0;
};

// (g^2 + eps^2)^{(p-2)/2}
double degenerate_coef(double g, double p, double eps) {
  const double s = g * g + eps * eps;
  if (p == 2.0) return 1.0;
  if (p == 3.0) return std::sqrt(s);
  if (p == 4.0) return s;
  return std::pow(s, 0.5 * (p - 2.0));
}

// Explicit conservative stepper; caches u^gamma between the stability
// estimate and the update.
class Stepper {
 public:
  explicit Stepper(const State& state)
      : grid_(*state.grid), pr_(state.params), pow_(state.params.gamma), w_(grid_.m), g_(grid_.m + 1, 0.0),
        flux_(grid_.m + 1, 0.0) {
    floor_pow_ = state.u_floor > 0.0 ? std::pow(state.u_floor, pr_.gamma - 1.0) : 0.0;
    refresh(state);
  }

  double stable_dt(const State& state, double cfl) const {
    if (!(cfl > 0.0 && cfl <= 1.0)) throw Error(ErrorKind::BadOption, "cfl must lie in (0, 1]");
    double dmax = 0.0;
    for (std::size_t i = 0; i < grid_.m; ++i) {
      const double u = state.u[i];
      double upow;  // max(u, u_floor)^{gamma-1}
      if (u > 0.0 && u >= state.u_floor) {
        upow = w_[i] / u;
      } else if (state.u_floor > 0.0) {
        upow = floor_pow_;
      } else {
        continue;
      }
      double coef = 1.0;
      if (pr_.p != 2.0) {
        const double gi = std::max(std::abs(g_[i]), std::abs(g_[i + 1]));
        coef = (pr_.p - 1.0) * degenerate_coef(gi, pr_.p, state.eps);
      }
      dmax = std::max(dmax, coef * upow);
    }
    dmax *= pr_.gamma;
    if (!(dmax > 0.0)) throw Error(ErrorKind::StagnantState, "local diffusivity vanishes everywhere");
    const double dt = cfl * grid_.dr * grid_.dr / dmax;
    if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorKind::NonFiniteState, "CFL step is not finite");
    return dt;
  }

  void advance(State& state, double dt) {
    if (!(dt > 0.0)) throw Error(ErrorKind::BadOption, "dt must be positive");
    for (std::size_t j = 1; j < grid_.m; ++j) flux_[j] = grid_.areas[j] * p_flux(g_[j], pr_.p, state.eps);
    double clamped = 0.0;
    for (std::size_t i = 0; i < grid_.m; ++i) {
      double u = state.u[i] + dt / grid_.volumes[i] * (flux_[i + 1] - flux_[i]);
      if (!std::isfinite(u)) {
        throw Error(ErrorKind::NonFiniteState, "non-finite density in cell " + std::to_string(i) + " at t = " +
                                                   std::to_string(state.t));
      }
      if (u < 0.0) {
        clamped -= u * grid_.volumes[i];
        u = 0.0;
      }
      state.u[i] = u;
    }
    state.clamped_mass += clamped;
    state.t += dt;
    ++state.steps;
    refresh(state);
  }

 private:
  void refresh(const State& state) {
    for (std::size_t i = 0; i < grid_.m; ++i) w_[i] = pow_(state.u[i]);
    const double inv = 1.0 / grid_.dr;
    for (std::size_t j = 1; j < grid_.m; ++j) g_[j] = (w_[j] - w_[j - 1]) * inv;
  }

  const RadialGrid& grid_;
  const Params& pr_;
  PowerFn pow_;
  std::vector<double> w_;
  std::vector<double> g_;
  std::vector<double> flux_;
  double floor_pow_ = 0.0;
};

}  // namespace

const char* to_string(InitKind kind) {
  switch (kind) {
    case InitKind::Barenblatt: return "barenblatt";
    case InitKind::PerturbedBarenblatt: return "perturbed_barenblatt";
    case InitKind::GaussianBump: return "gaussian_bump";
    case InitKind::DoubleBump: return "double_bump";
  }
  return "unknown";
}

InitKind parse_init_kind(const std::string& name) {
  if (name == "barenblatt") return InitKind::Barenblatt;
  if (name == "perturbed_barenblatt") return InitKind::PerturbedBarenblatt;
  if (name == "gaussian_bump") return InitKind::GaussianBump;
  if (name == "double_bump") return InitKind::DoubleBump;
  throw Error(ErrorKind::BadOption, "unknown initial condition '" + name + "'");
}

State state_from_density(const Params& params, std::shared_ptr<const RadialGrid> grid, std::vector<double> u,
                         double t, std::optional<double> eps, std::optional<double> u_floor) {
  if (!grid) throw Error(ErrorKind::BadMesh, "null grid");
  if (u.size() != grid->m) throw Error(ErrorKind::LengthMismatch, "density length differs from grid");
  for (double x : u) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw Error(ErrorKind::BadOption, "density must be finite and >= 0");
  }
  normalise(*grid, u);
  State s;
  s.params = params;
  s.grid = std::move(grid);
  s.u = std::move(u);
  s.t = t;
  const double umax = *std::max_element(s.u.begin(), s.u.end());
  s.u_floor = u_floor.value_or(1e-12 * umax);
  if (eps) {
    s.eps = *eps;
  } else {
    const std::vector<double> g = face_gradient(*s.grid, power_field(s.u, params.gamma));
    double gmax = 0.0;
    for (double x : g) gmax = std::max(gmax, std::abs(x));
    s.eps = 1e-6 * gmax;
  }
  if (s.eps < 0.0 || s.u_floor < 0.0) throw Error(ErrorKind::BadOption, "eps and u_floor must be >= 0");
  return s;
}

State initial_condition(InitKind kind, const Params& params, std::shared_ptr<const RadialGrid> grid,
                        const InitOptions& options) {
  if (!grid) throw Error(ErrorKind::BadMesh, "null grid");
  if (!(options.t0 > 0.0) && (kind == InitKind::Barenblatt || kind == InitKind::PerturbedBarenblatt)) {
    throw Error(ErrorKind::NonPositiveTime, "Barenblatt data need t0 > 0");
  }
  std::vector<double> u;
  switch (kind) {
    case InitKind::Barenblatt:
    case InitKind::PerturbedBarenblatt: {
      const BarenblattSpec spec = make_barenblatt(params);
      const double label = label_time(spec, options.t0);
      const double rho = core_radius(spec, label);
      if (kind == InitKind::PerturbedBarenblatt && !(std::abs(options.amplitude) < 1.0)) {
        throw Error(ErrorKind::BadOption, "perturbation amplitude must lie in (-1, 1)");
      }
      const double amp = kind == InitKind::PerturbedBarenblatt ? options.amplitude : 0.0;
      const double k = options.mode * M_PI / rho;
      // The cosine is frozen beyond the core radius so that the algebraic tail of
      // fast-diffusion data is only rescaled.
      auto f = [&](double r) { return source_solution(spec, r, label) * (1.0 + amp * std::cos(k * std::min(r, rho))); };
      const std::vector<double> cuts = {rho};
      u = cell_averages(*grid, f, params.b > 0.0 ? std::span<const double>(cuts) : std::span<const double>());
      break;
    }
    case InitKind::GaussianBump:
    case InitKind::DoubleBump: {
      if (!(options.width > 0.0)) throw Error(ErrorKind::BadOption, "width must be positive");
      if (kind == InitKind::DoubleBump && !(options.separation > 0.0)) {
        throw Error(ErrorKind::BadOption, "separation must be positive");
      }
      const double w2 = 2.0 * options.width * options.width;
      const bool ring = kind == InitKind::DoubleBump;
      auto f = [&](double r) {
        double v = std::exp(-r * r / w2);
        if (ring) v += std::exp(-(r - options.separation) * (r - options.separation) / w2);
        return v;
      };
      u = cell_averages(*grid, f);
      break;
    }
  }
  return state_from_density(params, std::move(grid), std::move(u), options.t0, options.eps, options.u_floor);
}

double cfl_dt(const State& state, double cfl) {
  require_state(state);
  Stepper stepper(state);
  return stepper.stable_dt(state, cfl);
}

void advance(State& state, double dt) {
  require_state(state);
  Stepper stepper(state);
  stepper.advance(state, dt);
}

State step(const State& state, double dt) {
  State next = state;
  advance(next, dt);
  return next;
}

double l1_error(const State& state, const BarenblattSpec& spec) {
  require_state(state);
  const RadialGrid& grid = *state.grid;
  const double label = label_time(spec, state.t);
  auto f = [&](double r) { return source_solution(spec, r, label); };
  const std::vector<double> cuts = {core_radius(spec, label)};
  const std::vector<double> exact =
      cell_averages(grid, f, spec.params.b > 0.0 ? std::span<const double>(cuts) : std::span<const double>());
  double acc = 0.0;
  for (std::size_t i = 0; i < grid.m; ++i) acc += std::abs(state.u[i] - exact[i]) * grid.volumes[i];
  return acc;
}

std::vector<Snapshot> evolve(State state, const EvolveOptions& options) {
  require_state(state);
  if (!(options.t_end >= state.t)) throw Error(ErrorKind::BadOption, "t_end lies before the initial time");
  const std::size_t intervals = std::max<std::size_t>(options.save_every, 1);
  const double t0 = state.t;
  const double span = options.t_end - t0;

  std::vector<Snapshot> out;
  auto record = [&](double dt) {
    DiagRecord r = diagnose(state);
    r.dt = dt;
    if (options.reference) r.err_exact_l1 = l1_error(state, *options.reference);
    out.push_back(Snapshot{state, r});
  };

  record(0.0);
  if (span == 0.0) return out;

  Stepper stepper(state);
  double last_dt = 0.0;
  std::size_t steps = 0;
  for (std::size_t k = 1; k <= intervals; ++k) {
    const double target = k == intervals ? options.t_end : t0 + span * static_cast<double>(k) / intervals;
    while (state.t < target) {
      if (steps >= options.max_steps) {
        throw Error(ErrorKind::StepBudgetExceeded, "reached " + std::to_string(options.max_steps) + " steps at t = " +
                                                       std::to_string(state.t));
      }
      double dt = stepper.stable_dt(state, options.cfl);
      if (state.t + dt >= target) {
        dt = target - state.t;
        stepper.advance(state, dt);
        state.t = target;
      } else {
        stepper.advance(state, dt);
      }
      last_dt = dt;
      ++steps;
    }
    record(last_dt);
  }
  return out;
}

double pressure_residual(const State& prev, const State& next) {
  require_state(prev);
  require_state(next);
  if (prev.grid != next.grid && (prev.grid->m != next.grid->m || prev.grid->R != next.grid->R)) {
    throw Error(ErrorKind::MismatchedStates, "states live on different grids");
  }
  const double dt = next.t - prev.t;
  if (!(dt > 0.0)) throw Error(ErrorKind::MismatchedStates, "states are not in increasing time order");
  const RadialGrid& grid = *prev.grid;
  const Params& pr = prev.params;
  const PressureField a = pressure_field(prev);
  const PressureField c = pressure_field(next);

  auto rhs = [&](const PressureField& f) {
    const std::vector<double> lap = p_laplacian(grid, f.v, pr.p, f.eps);
    const std::vector<double> g = face_gradient(grid, f.v);
    std::vector<double> out(grid.m);
    for (std::size_t i = 0; i < grid.m; ++i) {
      const double gp = 0.5 * (std::pow(std::abs(g[i]), pr.p) + std::pow(std::abs(g[i + 1]), pr.p));
      out[i] = pr.b * f.v[i] * lap[i] + gp;
    }
    return out;
  };
  const std::vector<double> ra = rhs(a);
  const std::vector<double> rc = rhs(c);

  const std::vector<char> ok_a = regular_cells(prev, a);
  const std::vector<char> ok_c = regular_cells(next, c);
  double worst = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < grid.m; ++i) {
    if (!ok_a[i] || !ok_c[i]) continue;
    const double dv = (c.v[i] - a.v[i]) / dt;
    scale = std::max(scale, std::abs(dv));
    worst = std::max(worst, std::abs(dv - 0.5 * (ra[i] + rc[i])));
  }
  return scale > 0.0 ? worst / scale : worst;
}

double auto_radius(const BarenblattSpec& spec, double t_end) {
  const double label = label_time(spec, t_end);
  if (spec.params.b > 0.0) return 3.0 * core_radius(spec, label);
  return tail_radius(spec, label, 1e-6);
}

}  // namespace dnde
