#include "dnde/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "dnde/error.hpp"

namespace dnde {
namespace {

const RadialGrid& grid_of(const State& state) {
  if (!state.grid) throw Error(ErrorKind::BadMesh, "state has no grid");
  if (state.u.size() != state.grid->m) {
    throw Error(ErrorKind::LengthMismatch, "state has " + std::to_string(state.u.size()) + " values for " +
                                               std::to_string(state.grid->m) + " cells");
  }
  return *state.grid;
}

void require_fisher_range(const Params& params) {
  if (!params.finite_fisher()) {
    throw Error(ErrorKind::OutOfRangeRegime, "Fisher information is infinite for " + describe(params));
  }
}

double pressure_eps(const RadialGrid& grid, const std::vector<double>& v, double p) {
  if (p >= 2.0) return 0.0;
  const std::vector<double> g = face_gradient(grid, v);
  double gmax = 0.0;
  for (double x : g) gmax = std::max(gmax, std::abs(x));
  return 1e-6 * gmax;
}

// |g|^p with the same regularisation as the flux.
double p_power(double g, double p, double eps) { return p_flux(g, p, eps) * g; }

double fisher_integral(const State& state, const PressureField& pf) {
  const RadialGrid& grid = *state.grid;
  const std::vector<double> g = face_gradient(grid, pf.v);
  const bool guard = state.params.b < 0.0;
  double acc = 0.0;
  for (std::size_t j = 1; j < grid.m; ++j) {
    if (guard && (pf.flagged[j - 1] || pf.flagged[j])) continue;
    const double ubar = 0.5 * (state.u[j - 1] + state.u[j]);
    acc += p_power(g[j], state.params.p, pf.eps) * ubar * grid.dual[j];
  }
  return acc;
}

// Per-cell Hessian quantities of the pressure; `used` marks the cells that enter integrals.
struct PressureHessian {
  std::vector<double> X;    // (|v_r|^{p-2} v_r)_r
  std::vector<double> Y;    // |v_r|^{p-2} v_r / r
  std::vector<double> lap;  // finite-volume Delta_p v
  std::vector<char> used;
};

PressureHessian pressure_hessian(const State& state, const PressureField& pf) {
  const RadialGrid& grid = *state.grid;
  PressureHessian h;
  const RadialHessian rh = radial_hessian(grid, pf.v, state.params.p, pf.eps);
  h.X = rh.radial;
  h.Y = rh.angular;
  h.lap = p_laplacian(grid, pf.v, state.params.p, pf.eps);
  h.used = regular_cells(state, pf);
  return h;
}

}  // namespace

std::vector<char> regular_cells(const State& state, const PressureField& pf) {
  const RadialGrid& grid = grid_of(state);
  const std::size_t m = grid.m;
  std::vector<char> bad(m, 0);
  const double level = 100.0 * state.u_floor;
  double front = -1.0;
  if (state.params.b > 0.0) {
    const std::vector<double> g = face_gradient(grid, pf.v);
    double gmax = 0.0;
    for (double x : g) gmax = std::max(gmax, std::abs(x));
    front = 3.0 * grid.dr * gmax;
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (state.u[i] < level || pf.flagged[i] || std::abs(pf.v[i]) < front) bad[i] = 1;
  }
  std::vector<char> ok(m, 1);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t lo = i < 2 ? 0 : i - 2;
    const std::size_t hi = std::min(i + 2, m - 1);
    for (std::size_t k = lo; k <= hi; ++k) {
      if (bad[k]) ok[i] = 0;
    }
  }
  ok[m - 1] = 0;
  return ok;
}

void write_csv_header(std::ostream& os) { os << kDiagCsvHeader << '\n'; }

void write_csv_row(std::ostream& os, const DiagRecord& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,", r.t, r.dt, r.mass, r.E_b,
                r.R_b, r.N_b, r.I_b, r.Q_b, r.W_b);
  os << buf;
  if (r.err_exact_l1) {
    std::snprintf(buf, sizeof buf, "%.17g", *r.err_exact_l1);
    os << buf;
  }
  os << '\n';
}

double entropy_Eb(const State& state) {
  const RadialGrid& grid = grid_of(state);
  const double e = state.params.b + 1.0;
  double acc = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < grid.m; ++i) {
    const double u = state.u[i];
    total += u * grid.volumes[i];
    if (u > 0.0) acc += std::pow(u, e) * grid.volumes[i];
  }
  if (!(total > 0.0)) throw Error(ErrorKind::EmptyDensity, "density has no mass");
  return acc;
}

double renyi_Rb(const State& state) { return -std::log(entropy_Eb(state)) / state.params.b; }

double power_Nb(const State& state) { return std::pow(entropy_Eb(state), state.params.sigma); }

PressureField pressure_field(const State& state) {
  const RadialGrid& grid = grid_of(state);
  const Params& pr = state.params;
  PressureField pf;
  pf.v.resize(grid.m);
  pf.flagged.assign(grid.m, 0);
  const double c = pr.gamma / pr.b;
  for (std::size_t i = 0; i < grid.m; ++i) {
    double u = state.u[i];
    if (u < state.u_floor) pf.flagged[i] = 1;
    if (pr.b < 0.0) u = std::max(u, state.u_floor);
    pf.v[i] = u > 0.0 ? c * std::pow(u, pr.b) : 0.0;
  }
  pf.eps = pressure_eps(grid, pf.v, pr.p);
  return pf;
}

double fisher_Ib(const State& state) {
  require_fisher_range(state.params);
  const double E = entropy_Eb(state);
  const PressureField pf = pressure_field(state);
  const Params& pr = state.params;
  return (pr.b + 1.0) / (pr.gamma * E) * fisher_integral(state, pf);
}

double iso_Qb(const State& state) { return power_Nb(state) * fisher_Ib(state); }

double j_functional(const State& state) {
  const Params& pr = state.params;
  return pr.gamma / (pr.b + 1.0) * iso_Qb(state);
}

WProduction w_production(const State& state) {
  require_fisher_range(state.params);
  const RadialGrid& grid = grid_of(state);
  const Params& pr = state.params;
  const double E = entropy_Eb(state);
  const PressureField pf = pressure_field(state);
  const double I = (pr.b + 1.0) / (pr.gamma * E) * fisher_integral(state, pf);
  const PressureHessian h = pressure_hessian(state, pf);
  const double n = grid.n;
  const double var_coef = pr.b * (1.0 - pr.sigma);
  double hess = 0.0;
  double var = 0.0;
  for (std::size_t i = 0; i < grid.m; ++i) {
    if (!h.used[i]) continue;
    const double wgt = std::pow(state.u[i], pr.b + 1.0) * grid.volumes[i];
    const double D = h.X[i] + (n - 1.0) * h.Y[i];
    const double tr = h.X[i] - D / n;
    const double ta = h.Y[i] - D / n;
    hess += pr.p * (tr * tr + (n - 1.0) * ta * ta) * wgt;
    const double dev = h.lap[i] + I;
    var += var_coef * dev * dev * wgt;
  }
  const double pre = pr.gamma / (pr.b + 1.0) * std::pow(E, pr.sigma - 1.0);
  WProduction out;
  out.hessian_part = pre * hess;
  out.variance_part = pre * var;
  out.total = out.hessian_part + out.variance_part;
  return out;
}

EntropyRates entropy_rates(const State& state) {
  require_fisher_range(state.params);
  const RadialGrid& grid = grid_of(state);
  const Params& pr = state.params;
  const PressureField pf = pressure_field(state);
  const PressureHessian h = pressure_hessian(state, pf);
  const double n = grid.n;
  EntropyRates out;
  double lap_acc = 0.0;
  double second_acc = 0.0;
  for (std::size_t i = 0; i < grid.m; ++i) {
    const double u = state.u[i];
    if (!(u > 0.0)) continue;
    const double wgt = std::pow(u, pr.b + 1.0) * grid.volumes[i];
    // Summation by parts needs every cell here, wall included.
    if (!(pr.b < 0.0 && pf.flagged[i])) lap_acc += h.lap[i] * wgt;
    if (!h.used[i]) continue;
    const double X = h.X[i];
    const double Y = h.Y[i];
    second_acc += (X * X + (n - 1.0) * Y * Y + pr.b * h.lap[i] * h.lap[i]) * wgt;
  }
  out.lap_form = pr.b * lap_acc;
  out.fisher_form = -pr.b * (pr.b + 1.0) / pr.gamma * fisher_integral(state, pf);
  out.second = pr.p * pr.b * second_acc;
  return out;
}

DiagRecord diagnose(const State& state) {
  const RadialGrid& grid = grid_of(state);
  const Params& pr = state.params;
  DiagRecord r;
  r.t = state.t;
  r.mass = integrate(grid, state.u);
  r.E_b = entropy_Eb(state);
  r.R_b = -std::log(r.E_b) / pr.b;
  r.N_b = std::pow(r.E_b, pr.sigma);
  if (pr.finite_fisher()) {
    r.I_b = fisher_Ib(state);
    r.Q_b = r.N_b * r.I_b;
    r.W_b = w_production(state).total;
  } else {
    r.I_b = r.Q_b = r.W_b = std::nan("");
  }
  return r;
}

double de_bruijn_residual(std::span<const DiagRecord> records) {
  if (records.size() < 3) throw Error(ErrorKind::TooFewRecords, "de Bruijn residual needs 3 records");
  double worst = 0.0;
  for (std::size_t k = 1; k + 1 < records.size(); ++k) {
    const double dR = (records[k + 1].R_b - records[k - 1].R_b) / (records[k + 1].t - records[k - 1].t);
    worst = std::max(worst, std::abs(dR - records[k].I_b) / records[k].I_b);
  }
  return worst;
}

SecondDerivativeCheck second_derivative_check(std::span<const DiagRecord> records, const State& middle) {
  if (records.size() < 3) throw Error(ErrorKind::TooFewRecords, "second derivative needs 3 records");
  if (std::abs(middle.t - records[1].t) > 1e-9 * std::max(1.0, std::abs(records[1].t))) {
    throw Error(ErrorKind::MismatchedStates, "state time does not match the middle record");
  }
  const Params& pr = middle.params;
  const double h1 = records[1].t - records[0].t;
  const double h2 = records[2].t - records[1].t;
  SecondDerivativeCheck out;
  out.d2N_fd = 2.0 * (h1 * records[2].N_b - (h1 + h2) * records[1].N_b + h2 * records[0].N_b) /
               (h1 * h2 * (h1 + h2));
  const double W = w_production(middle).total;
  const double k = pr.sigma * pr.b * (pr.b + 1.0) / pr.gamma;
  out.d2N_formula = k * W;
  out.d2N_formula_flipped = -k * W;
  const double scale = std::max(std::abs(out.d2N_fd), std::abs(out.d2N_formula));
  out.mismatch = scale > 0.0 ? std::abs(out.d2N_fd - out.d2N_formula) / scale : 0.0;
  return out;
}

SobolevCheck sobolev_check(const RadialGrid& grid, std::span<const double> w, int n, double p) {
  if (!(p > 1.0 && p < n)) throw Error(ErrorKind::BadExponent, "Sobolev check needs 1 < p < n");
  if (w.size() != grid.m) throw Error(ErrorKind::LengthMismatch, "w length differs from the grid");
  const double pstar = n * p / (n - p);
  double norm = 0.0;
  for (std::size_t i = 0; i < grid.m; ++i) {
    if (w[i] < 0.0) throw Error(ErrorKind::BadOption, "w must be nonnegative");
    norm += std::pow(w[i], pstar) * grid.volumes[i];
  }
  if (!(norm > 0.0)) throw Error(ErrorKind::EmptyDensity, "w vanishes identically");
  const double scale = std::pow(norm, -1.0 / pstar);
  const std::vector<double> g = face_gradient(grid, w);
  double lhs = 0.0;
  for (std::size_t j = 1; j < grid.m; ++j) lhs += std::pow(std::abs(g[j] * scale), p) * grid.dual[j];
  SobolevCheck out;
  out.lhs = lhs;
  out.rhs = sobolev_constant(n, p);
  out.ratio = out.lhs / out.rhs;
  return out;
}

GnCheck gn_check(const RadialGrid& grid, std::span<const double> w, const Params& params, double s) {
  if (w.size() != grid.m) throw Error(ErrorKind::LengthMismatch, "w length differs from the grid");
  const GnConstant c = gn_constant(params, s);
  const double p = params.p;
  const double r = (p - 1.0) * s + 1.0;
  auto lnorm = [&](double e) {
    double acc = 0.0;
    for (std::size_t i = 0; i < grid.m; ++i) acc += std::pow(w[i], e) * grid.volumes[i];
    return std::pow(acc, 1.0 / e);
  };
  const std::vector<double> g = face_gradient(grid, w);
  double grad_p = 0.0;
  for (std::size_t j = 1; j < grid.m; ++j) grad_p += std::pow(std::abs(g[j]), p) * grid.dual[j];
  const double grad = std::pow(grad_p, 1.0 / p);
  const double norm_ps = lnorm(p * s);
  const double norm_r = lnorm(r);
  const double th = c.exponent;
  const double lead = std::pow(p * s * params.gamma, -p);

  GnCheck out;
  out.part = c.part;
  out.exponent = th;
  out.constant = c.value;
  if (c.part == GnPart::FastDiffusion) {
    out.lhs = norm_ps;
    out.rhs = c.value * std::pow(grad, th) * std::pow(norm_r, 1.0 - th);
    out.remainder_base = std::exp(-p / th * c.ln_value) * std::pow(norm_ps, p / th);
    out.remainder_lhs = grad_p * std::pow(norm_r, p * (1.0 - th) / th) - out.remainder_base;
    out.remainder_scale = lead * std::pow(norm_ps, p / th);
  } else {
    out.lhs = norm_r;
    out.rhs = c.value * std::pow(grad, th) * std::pow(norm_ps, 1.0 - th);
    out.remainder_base = std::exp(-p / th * c.ln_value) * std::pow(norm_r, p / th);
    out.remainder_lhs = grad_p * std::pow(norm_ps, p * (1.0 - th) / th) - out.remainder_base;
    out.remainder_scale = lead * std::pow(norm_r, p / th);
  }
  out.ratio = out.lhs / out.rhs;
  return out;
}

std::vector<double> gn_initial_density(const RadialGrid& grid, std::span<const double> w, const Params& params,
                                       double s) {
  if (w.size() != grid.m) throw Error(ErrorKind::LengthMismatch, "w length differs from the grid");
  const double e = params.p * s;
  std::vector<double> u(grid.m);
  for (std::size_t i = 0; i < grid.m; ++i) u[i] = std::pow(w[i], e);
  const double total = integrate(grid, u);
  if (!(total > 0.0)) throw Error(ErrorKind::EmptyDensity, "w vanishes identically");
  for (double& x : u) x /= total;
  return u;
}

}  // namespace dnde
