#include "dnde/suites.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <thread>

#include "dnde/error.hpp"
#include "dnde/special_functions.hpp"

namespace dnde {
namespace {

using Clock = std::chrono::steady_clock;

const char* kAnchorExponents = "derived exponents";
const char* kAnchorIso = "sharp isoperimetric inequality";
const char* kAnchorANorm = "A-norm decomposition";
const char* kAnchorGnExponent = "Gagliardo-Nirenberg exponent";
const char* kAnchorMoments = "Barenblatt moments";
const char* kAnchorSelfSimilar = "self-similar source solution";
const char* kAnchorPressure = "pressure equation";
const char* kAnchorLinear = "entropy power linear in time";
const char* kAnchorDeBruijn = "de Bruijn identity";
const char* kAnchorEntropyRates = "entropy derivative identities";
const char* kAnchorConcave = "entropy power concavity";
const char* kAnchorProduction = "entropy production";
const char* kAnchorQDecreasing = "isoperimetric ratio decreasing";
const char* kAnchorJLimit = "long-time limit";
const char* kAnchorSobolev = "sharp Sobolev inequality";
const char* kAnchorGn = "Gagliardo-Nirenberg inequality";
const char* kAnchorRemainder = "Gagliardo-Nirenberg remainder";

Check strict_lower(std::string name, double value, double tol, std::string anchor) {
  return Check{std::move(name), value, tol, tol, value > tol, std::move(anchor)};
}

InitKind config_kind(const ExperimentConfig& c) { return parse_init_kind(c.init.kind); }

InitOptions init_options(const ExperimentConfig& c) {
  const Params pr = config_params(c);
  InitOptions io;
  io.t0 = config_time_scale(pr) * c.time.t0;
  auto opt = [&](const char* key, double fallback) {
    auto it = c.init.options.find(key);
    return it == c.init.options.end() ? fallback : it->second;
  };
  io.amplitude = opt("amplitude", io.amplitude);
  const double mode = opt("mode", io.mode);
  if (mode != std::floor(mode) || mode < 0) throw Error(ErrorKind::ConfigError, "config.init.options.mode: expected a nonnegative integer");
  io.mode = static_cast<int>(mode);
  io.width = opt("width", io.width);
  io.separation = opt("separation", io.separation);
  io.eps = c.regularization.eps_rule;
  io.u_floor = c.regularization.u_floor_rule;
  return io;
}

std::shared_ptr<const RadialGrid> make_grid(int n, double R, std::size_t m) {
  return std::make_shared<const RadialGrid>(build_grid(n, R, m));
}

std::vector<DiagRecord> records_of(const std::vector<Snapshot>& snaps) {
  std::vector<DiagRecord> out;
  out.reserve(snaps.size());
  for (const Snapshot& s : snaps) out.push_back(s.record);
  return out;
}

void require_source(const Params& pr, const std::string& suite) {
  if (!pr.has_source_solution()) {
    throw Error(ErrorKind::ConfigError, suite + " needs a source-type solution; got " + describe(pr));
  }
}

void require_fisher(const Params& pr, const std::string& suite) {
  if (!pr.finite_fisher()) {
    throw Error(ErrorKind::ConfigError, suite + " needs finite Fisher information; got " + describe(pr));
  }
}

double isoperimetric_limit(const Params& pr) { return pr.gamma / (pr.b + 1.0) * const_isoperimetric(pr); }

// Second difference on three records with possibly unequal spacing.
double second_difference(double t0, double f0, double t1, double f1, double t2, double f2) {
  const double h0 = t1 - t0;
  const double h1 = t2 - t1;
  return 2.0 * (h0 * f2 - (h0 + h1) * f1 + h1 * f0) / (h0 * h1 * (h0 + h1));
}

// R^2 of the least-squares fit N = k t through the origin, t in label units.
double proportional_fit(const std::vector<DiagRecord>& recs, double tau) {
  double st = 0.0, sn = 0.0, mean = 0.0;
  for (const DiagRecord& r : recs) {
    st += (r.t / tau) * (r.t / tau);
    sn += (r.t / tau) * r.N_b;
    mean += r.N_b;
  }
  mean /= recs.size();
  const double k = sn / st;
  double res = 0.0, tot = 0.0;
  for (const DiagRecord& r : recs) {
    res += std::pow(r.N_b - k * r.t / tau, 2);
    tot += std::pow(r.N_b - mean, 2);
  }
  return tot > 0.0 ? 1.0 - res / tot : (res == 0.0 ? 1.0 : 0.0);
}

Check w_nonnegative(const ExperimentConfig& c, const std::vector<DiagRecord>& recs) {
  double lo = 0.0, hi = 0.0;
  for (const DiagRecord& r : recs) {
    lo = std::min(lo, r.W_b);
    hi = std::max(hi, std::abs(r.W_b));
  }
  const double v = hi > 0.0 ? std::max(0.0, -lo) / hi : 0.0;
  return upper_check("W_nonnegative", v, 0.0, tolerance(c, "W_nonnegative"), kAnchorProduction);
}

bool w_defined(const Params& pr) { return pr.b >= -1.0 / pr.n - kRegimeTolerance; }

bool gn_applies(const Params& pr) {
  try {
    gn_exponents(pr, gn_s_of_b(pr));
    return true;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::RangeMismatch) throw;
    return false;
  }
}

// ---- suites ---------------------------------------------------------------

void suite_constants(const ExperimentConfig& c, Report& rep) {
  const Params pr = config_params(c);
  rep.checks.push_back(relative_check("a_sigma", pr.a, -1.0 / pr.sigma, tolerance(c, "a_sigma"), kAnchorExponents));
  if (pr.finite_fisher()) {
    const IsoperimetricForms f = isoperimetric_forms(pr);
    rep.checks.push_back(relative_check("C_iso_two_forms", std::exp(f.ln_direct_form), std::exp(f.ln_shifted_form),
                                        tolerance(c, "C_iso_two_forms"), kAnchorIso));
    ExperimentConfig bc = c;
    bc.init.kind = "barenblatt";
    bc.init.options.clear();
    bc.time.t_end = bc.time.t0;
    const State s = config_initial_state(bc);
    rep.checks.push_back(relative_check("C_iso_quadrature", iso_Qb(s), const_isoperimetric(pr),
                                        tolerance(c, "C_iso_quadrature"), kAnchorIso));
  }
  rep.checks.push_back(
      upper_check("A_norm_identity", a_norm_fuzz(10000, 20240917ULL), 0.0, tolerance(c, "A_norm_identity"), kAnchorANorm));
  if (gn_applies(pr)) {
    const GnExponent e = gn_exponents(pr, gn_s_of_b(pr));
    rep.checks.push_back(
        relative_check("gn_exponent_two_forms", e.value, e.value_sigma, tolerance(c, "gn_exponent_two_forms"), kAnchorGnExponent));
  }
}

void suite_quadrature(const ExperimentConfig& c, Report& rep) {
  const Params pr = config_params(c);
  require_source(pr, "quadrature");
  const BarenblattSpec spec = make_barenblatt(pr);
  const double label = c.time.t0;
  // Fast-diffusion tails are cut where less than 1e-8 of the mass remains.
  const double R = c.grid.r_max.value_or(pr.b > 0.0 ? 3.0 * core_radius(spec, label) : tail_radius(spec, label, 1e-8));
  const auto grid = make_grid(pr.n, R, c.grid.cells);
  const std::vector<double> cuts = {core_radius(spec, label)};
  std::vector<double> u = cell_averages(
      *grid, [&](double r) { return source_solution(spec, r, label); },
      pr.b > 0.0 ? std::span<const double>(cuts) : std::span<const double>());

  State s;
  s.params = pr;
  s.grid = grid;
  s.u = u;
  s.t = config_time_scale(pr) * label;
  s.u_floor = 1e-12 * *std::max_element(u.begin(), u.end());

  rep.checks.push_back(relative_check("mass", integrate(*grid, u), 1.0, tolerance(c, "mass"), kAnchorMoments));
  if (!pr.finite_fisher()) return;
  const ExactFunctionals ex = exact_functionals(spec, label);
  rep.checks.push_back(relative_check("E_b", entropy_Eb(s), ex.E_b, tolerance(c, "E_b"), kAnchorMoments));
  std::vector<double> xq(grid->m);
  for (std::size_t i = 0; i < grid->m; ++i) xq[i] = std::pow(grid->centers[i], pr.q) * u[i];
  rep.checks.push_back(relative_check("q_moment", integrate(*grid, xq), ex.qmoment, tolerance(c, "q_moment"), kAnchorMoments));
  rep.checks.push_back(relative_check("I_b", fisher_Ib(s), ex.I_b, tolerance(c, "I_b"), kAnchorMoments));
}

void suite_self_similar(const ExperimentConfig& c, Report& rep) {
  const Params pr = config_params(c);
  require_source(pr, "self_similar");
  if (config_kind(c) != InitKind::Barenblatt) {
    throw Error(ErrorKind::ConfigError, "self_similar needs init.kind = barenblatt");
  }
  const std::vector<Snapshot> snaps = run_evolution(c);
  rep.series_file = write_series(c, "self_similar", snaps);
  const std::vector<DiagRecord> recs = records_of(snaps);
  const double err = recs.back().err_exact_l1.value_or(NAN);
  rep.checks.push_back(upper_check("l1_error", err, 0.0, tolerance(c, "l1_error"), kAnchorSelfSimilar));

  ExperimentConfig coarse = c;
  coarse.grid.cells = c.grid.cells / 2;
  const std::vector<Snapshot> cs = run_evolution(coarse);
  const double err_coarse = cs.back().record.err_exact_l1.value_or(NAN);
  rep.checks.push_back(
      lower_check("convergence_order", std::log2(err_coarse / err), 1.0, tolerance(c, "convergence_order"), kAnchorSelfSimilar));

  double drift = 0.0;
  for (const DiagRecord& r : recs) drift = std::max(drift, std::abs(r.mass - recs.front().mass));
  rep.checks.push_back(upper_check("mass_conservation", drift, 0.0, tolerance(c, "mass_conservation"), kAnchorSelfSimilar));
  if (snaps.size() >= 2) {
    const double res = pressure_residual(snaps[snaps.size() - 2].state, snaps.back().state);
    rep.checks.push_back(upper_check("pressure_residual", res, 0.0, tolerance(c, "pressure_residual"), kAnchorPressure));
  }
  rep.checks.push_back(
      lower_check("N_linear_fit", proportional_fit(recs, config_time_scale(pr)), 1.0, tolerance(c, "N_linear_fit"), kAnchorLinear));
}

void suite_debruijn(const ExperimentConfig& c, Report& rep) {
  const Params pr = config_params(c);
  require_fisher(pr, "debruijn");
  const std::vector<Snapshot> snaps = run_evolution(c);
  rep.series_file = write_series(c, "debruijn", snaps);
  const std::vector<DiagRecord> recs = records_of(snaps);
  rep.checks.push_back(upper_check("max_residual", de_bruijn_residual(recs), 0.0, tolerance(c, "max_residual"), kAnchorDeBruijn));

  const std::size_t k = recs.size() / 2;
  if (k == 0 || k + 1 >= recs.size()) throw Error(ErrorKind::TooFewRecords, "debruijn needs at least 3 records");
  const DiagRecord& a = recs[k - 1];
  const DiagRecord& m = recs[k];
  const DiagRecord& z = recs[k + 1];
  const EntropyRates er = entropy_rates(snaps[k].state);
  const double fd = (z.E_b - a.E_b) / (z.t - a.t);
  const double spread = std::max({std::abs(fd - er.lap_form), std::abs(fd - er.fisher_form), std::abs(er.lap_form - er.fisher_form)});
  rep.checks.push_back(upper_check("dE_identity", spread / std::abs(fd), 0.0, tolerance(c, "dE_identity"), kAnchorEntropyRates));
  const double fd2 = second_difference(a.t, a.E_b, m.t, m.E_b, z.t, z.E_b);
  rep.checks.push_back(
      relative_check("d2E_identity", fd2, er.second, tolerance(c, "d2E_identity"), kAnchorEntropyRates));
}

void suite_concavity(const ExperimentConfig& c, Report& rep) {
  const Params pr = config_params(c);
  require_fisher(pr, "concavity");
  const std::vector<Snapshot> snaps = run_evolution(c);
  rep.series_file = write_series(c, "concavity", snaps);
  const std::vector<DiagRecord> recs = records_of(snaps);
  if (recs.size() < 3) throw Error(ErrorKind::TooFewRecords, "concavity needs at least 3 records");

  double min_step = INFINITY, max_step = 0.0;
  for (std::size_t k = 1; k < recs.size(); ++k) {
    const double d = recs[k].N_b - recs[k - 1].N_b;
    min_step = std::min(min_step, d);
    max_step = std::max(max_step, std::abs(d));
  }
  rep.checks.push_back(strict_lower("N_increasing", max_step > 0.0 ? min_step / max_step : 0.0,
                                    tolerance(c, "N_increasing"), kAnchorConcave));
  if (config_kind(c) == InitKind::Barenblatt) {
    rep.checks.push_back(lower_check("N_linear_fit", proportional_fit(recs, config_time_scale(pr)), 1.0,
                                     tolerance(c, "N_linear_fit"), kAnchorLinear));
  } else {
    double top = -INFINITY, scale = 0.0;
    for (std::size_t k = 1; k + 1 < recs.size(); ++k) {
      const double dd = second_difference(recs[k - 1].t, recs[k - 1].N_b, recs[k].t, recs[k].N_b, recs[k + 1].t, recs[k + 1].N_b);
      top = std::max(top, dd);
      scale = std::max(scale, std::abs(dd));
    }
    rep.checks.push_back(upper_check("N_second_difference", scale > 0.0 ? top / scale : 0.0, 0.0,
                                     tolerance(c, "N_second_difference"), kAnchorConcave));
  }
  if (w_defined(pr)) rep.checks.push_back(w_nonnegative(c, recs));
}

void suite_isoperimetric(const ExperimentConfig& c, Report& rep) {
  const Params pr = config_params(c);
  require_fisher(pr, "isoperimetric");
  const std::vector<Snapshot> snaps = run_evolution(c);
  rep.series_file = write_series(c, "isoperimetric", snaps);
  const std::vector<DiagRecord> recs = records_of(snaps);
  const double C = const_isoperimetric(pr);

  double rise = -INFINITY, lowest = INFINITY, off = 0.0;
  for (std::size_t k = 0; k < recs.size(); ++k) {
    if (k > 0) rise = std::max(rise, recs[k].Q_b - recs[k - 1].Q_b);
    lowest = std::min(lowest, recs[k].Q_b);
    off = std::max(off, std::abs(recs[k].Q_b - C) / C);
  }
  if (recs.size() > 1) {
    rep.checks.push_back(upper_check("Q_nonincreasing", rise / recs.front().Q_b, 0.0, tolerance(c, "Q_nonincreasing"),
                                     kAnchorQDecreasing));
  }
  rep.checks.push_back(lower_check("Q_lower_bound", lowest / C, 1.0, tolerance(c, "Q_lower_bound"), kAnchorIso));
  const InitKind kind = config_kind(c);
  if (kind == InitKind::Barenblatt) {
    rep.checks.push_back(upper_check("Q_equals_C_iso", off, 0.0, tolerance(c, "Q_equals_C_iso"), kAnchorIso));
  }
  if (kind == InitKind::Barenblatt || kind == InitKind::PerturbedBarenblatt) {
    const double limit = isoperimetric_limit(pr);
    const double J = pr.gamma / (pr.b + 1.0) * recs.back().Q_b;
    rep.checks.push_back(relative_check("J_limit", J, limit, tolerance(c, "J_limit"), kAnchorJLimit));
  }
}

void suite_sobolev(const ExperimentConfig& c, Report& rep) {
  double classical = 0.0;
  for (int n = 3; n <= 6; ++n) {
    classical = std::max(classical, std::abs(sobolev_constant(n, 2.0) / sobolev_constant_p2_classical(n) - 1.0));
  }
  rep.checks.push_back(upper_check("S_classical", classical, 0.0, tolerance(c, "S_classical"), kAnchorSobolev));
  double chain = 0.0;
  for (auto [n, p] : {std::pair{3, 2.0}, std::pair{4, 2.0}, std::pair{5, 3.0}}) {
    chain = std::max(chain, std::abs(sobolev_from_isoperimetric(n, p) / sobolev_constant(n, p) - 1.0));
  }
  rep.checks.push_back(upper_check("S_from_isoperimetric", chain, 0.0, tolerance(c, "S_from_isoperimetric"), kAnchorSobolev));

  // The extremal needs 1 < p < n; other configurations fall back to (3, 2).
  int n = c.dimension;
  double p = c.p;
  if (!(p < n)) {
    n = 3;
    p = 2.0;
  }
  const double q = p / (p - 1.0);
  const double R = c.grid.r_max.value_or(1e4);
  const auto grid = make_grid(n, R, c.grid.cells);
  const std::vector<double> w = cell_averages(*grid, [&](double r) { return std::pow(1.0 + std::pow(r, q), (p - n) / p); });
  rep.checks.push_back(relative_check("sobolev_extremal", sobolev_check(*grid, w, n, p).ratio, 1.0,
                                      tolerance(c, "sobolev_extremal"), kAnchorSobolev));

  // Gaussian trial function and its rescaling lambda^{n/p*} w(lambda x).
  const std::size_t mg = std::min<std::size_t>(c.grid.cells, 20000);
  const double Rg = 12.0;
  const double lambda = 2.0;
  const double pstar = n * p / (n - p);
  auto gauss = [](double r) { return std::exp(-0.5 * r * r); };
  const auto g1 = make_grid(n, Rg, mg);
  const auto g2 = make_grid(n, Rg / lambda, mg);
  const double ratio = sobolev_check(*g1, cell_averages(*g1, gauss), n, p).ratio;
  const std::vector<double> wl =
      cell_averages(*g2, [&](double r) { return std::pow(lambda, n / pstar) * gauss(lambda * r); });
  const double ratio_l = sobolev_check(*g2, wl, n, p).ratio;
  rep.checks.push_back(lower_check("sobolev_gaussian", ratio, 1.0, tolerance(c, "sobolev_gaussian"), kAnchorSobolev));
  rep.checks.push_back(
      upper_check("sobolev_scaling", std::abs(ratio_l / ratio - 1.0), 0.0, tolerance(c, "sobolev_scaling"), kAnchorSobolev));
}

void suite_gn(const ExperimentConfig& c, Report& rep) {
  const Params pr = config_params(c);
  if (!gn_applies(pr)) {
    throw Error(ErrorKind::ConfigError, "gn needs -1/n < b < 0 or b > 0; got " + describe(pr));
  }
  const double s = gn_s_of_b(pr);
  const GnExponent e = gn_exponents(pr, s);
  rep.checks.push_back(
      relative_check("gn_exponent_two_forms", e.value, e.value_sigma, tolerance(c, "gn_exponent_two_forms"), kAnchorGnExponent));

  const BarenblattSpec spec = make_barenblatt(pr);
  const double rho = core_radius(spec, 1.0);
  const double R = c.grid.r_max.value_or(pr.b > 0.0 ? 3.0 * rho : 100.0 * rho);
  const auto grid = make_grid(pr.n, R, c.grid.cells);
  const double ps = pr.p * s;
  const std::vector<double> cuts = {rho};
  const std::vector<double> w = cell_averages(
      *grid, [&](double r) { return std::pow(profile(spec, r), 1.0 / ps); },
      pr.b > 0.0 ? std::span<const double>(cuts) : std::span<const double>());
  const GnCheck ext = gn_check(*grid, w, pr, s);
  rep.checks.push_back(relative_check("gn_extremal", ext.ratio, 1.0, tolerance(c, "gn_extremal"), kAnchorGn));
  rep.checks.push_back(upper_check("gn_extremal_remainder", std::abs(ext.remainder_lhs) / ext.remainder_base, 0.0,
                                   tolerance(c, "gn_extremal_remainder"), kAnchorRemainder));

  const std::vector<double> wg = cell_averages(*grid, [](double r) { return std::exp(-0.5 * r * r); });
  const GnCheck gg = gn_check(*grid, wg, pr, s);
  rep.checks.push_back(strict_lower("gn_gaussian", gg.remainder_lhs / gg.remainder_base, tolerance(c, "gn_gaussian"), kAnchorGn));
}

// Remainder identity J(u0) - J(u_T) = int_0^T W dt for u0 = w^{ps} with a
// Gaussian w; the run doubles its horizon until J(u_T) is close to its limit.
void remainder_identity(const ExperimentConfig& c, Report& rep) {
  const Params pr = config_params(c);
  const double s = gn_s_of_b(pr);
  const double tau = config_time_scale(pr);
  const double width = c.init.options.count("width") ? c.init.options.at("width") : 1.0;
  const double R = c.grid.r_max.value_or((pr.b > 0.0 ? 10.0 : 50.0) * width);
  // at least 40 cells per Gaussian width
  const std::size_t cells = std::max(c.grid.cells, static_cast<std::size_t>(std::ceil(40.0 * R / width)));
  const auto grid = make_grid(pr.n, R, cells);
  const std::vector<double> w = cell_averages(*grid, [&](double r) { return std::exp(-0.5 * r * r / (width * width)); });
  const GnCheck gc = gn_check(*grid, w, pr, s);
  State st = state_from_density(pr, grid, gn_initial_density(*grid, w, pr, s), 0.0, c.regularization.eps_rule,
                                c.regularization.u_floor_rule);

  const double J_inf = isoperimetric_limit(pr);
  const double J0 = j_functional(st);
  const double target = tolerance(c, "remainder_tail");
  double T = tau * std::ldexp(1.0, -12);
  double w_int = 0.0;
  double t_prev = 0.0;
  double w_prev = diagnose(st).W_b;
  double J = J0;
  std::vector<Snapshot> series;
  for (int chunk = 0; chunk < 48; ++chunk) {
    EvolveOptions eo;
    eo.t_end = T;
    eo.save_every = 40;
    eo.cfl = c.time.cfl;
    eo.max_steps = c.time.max_steps;
    std::vector<Snapshot> snaps = evolve(st, eo);
    for (std::size_t i = 1; i < snaps.size(); ++i) {
      const DiagRecord& r = snaps[i].record;
      w_int += 0.5 * (r.W_b + w_prev) * (r.t - t_prev);
      w_prev = r.W_b;
      t_prev = r.t;
    }
    series.insert(series.end(), snaps.begin() + (series.empty() ? 0 : 1), snaps.end());
    st = snaps.back().state;
    J = j_functional(st);
    if ((J - J_inf) / J0 <= target) break;
    T *= 2.0;
  }
  ExperimentConfig sc = c;
  sc.output.emit_snapshots = false;
  write_series(sc, "remainder_identity", series);

  const double gap = J - J_inf;
  const double drop = J0 - J;
  rep.checks.push_back(upper_check("remainder_tail", gap / J0, 0.0, target, kAnchorRemainder));
  rep.checks.push_back(relative_check("remainder_identity", w_int, drop, tolerance(c, "remainder_identity"), kAnchorRemainder));
  const double lo = gn_remainder_rhs(gc, w_int);
  const double hi = gn_remainder_rhs(gc, w_int + std::max(gap, 0.0));
  const double miss = std::max({0.0, lo - gc.remainder_lhs, gc.remainder_lhs - hi});
  rep.checks.push_back(upper_check("remainder_gn", miss / gc.remainder_lhs, 0.0, tolerance(c, "remainder_gn"), kAnchorRemainder));
}

void suite_remainder(const ExperimentConfig& c, Report& rep) {
  const Params pr = config_params(c);
  require_fisher(pr, "remainder");
  if (!w_defined(pr)) throw Error(ErrorKind::ConfigError, "remainder needs b >= -1/n; got " + describe(pr));

  ExperimentConfig pc = c;
  pc.init.kind = "perturbed_barenblatt";
  ExperimentConfig bc = c;
  bc.init.kind = "barenblatt";
  bc.init.options.clear();
  const double w_pert = diagnose(config_initial_state(pc)).W_b;
  const double w_bar = diagnose(config_initial_state(bc)).W_b;
  rep.checks.push_back(upper_check("W_barenblatt_ratio", std::abs(w_bar) / w_pert, 0.0, tolerance(c, "W_barenblatt_ratio"),
                                   kAnchorProduction));

  const std::vector<Snapshot> snaps = run_evolution(pc);
  rep.series_file = write_series(pc, "remainder", snaps);
  const double mismatch = d2N_series_mismatch(snaps);
  rep.checks.push_back(upper_check("d2N_mismatch", mismatch, 0.0, tolerance(c, "d2N_mismatch"), kAnchorConcave));

  ExperimentConfig fine = pc;
  fine.grid.cells = 2 * pc.grid.cells;
  fine.time.save_every = 2 * pc.time.save_every;
  const double mismatch_fine = d2N_series_mismatch(run_evolution(fine));
  rep.checks.push_back(upper_check("d2N_refinement", mismatch_fine / mismatch, 1.0, tolerance(c, "d2N_refinement"),
                                   kAnchorConcave));
  rep.checks.push_back(w_nonnegative(c, records_of(snaps)));

  if (gn_applies(pr)) remainder_identity(c, rep);
}

using SuiteFn = void (*)(const ExperimentConfig&, Report&);

const std::vector<std::pair<std::string, SuiteFn>>& suite_table() {
  static const std::vector<std::pair<std::string, SuiteFn>> table = {
      {"constants", suite_constants},   {"quadrature", suite_quadrature},       {"self_similar", suite_self_similar},
      {"debruijn", suite_debruijn},     {"concavity", suite_concavity},         {"isoperimetric", suite_isoperimetric},
      {"sobolev", suite_sobolev},       {"gn", suite_gn},                       {"remainder", suite_remainder},
  };
  return table;
}

void write_report(const ExperimentConfig& c, const Report& rep) {
  std::filesystem::create_directories(c.output.dir);
  std::ofstream out(std::filesystem::path(c.output.dir) / (rep.suite + "_report.json"));
  out << to_json(rep).dump(2) << "\n";
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, fn] : suite_table()) out.push_back(name);
    return out;
  }();
  return names;
}

double config_time_scale(const Params& params) { return params.has_source_solution() ? time_scale(params) : 1.0; }

double resolve_radius(const ExperimentConfig& c) {
  if (c.grid.r_max) return *c.grid.r_max;
  const Params pr = config_params(c);
  const InitKind kind = config_kind(c);
  const InitOptions io = init_options(c);
  double extent = 0.0;
  if (kind == InitKind::GaussianBump) extent = 8.0 * io.width;
  if (kind == InitKind::DoubleBump) extent = io.separation + 8.0 * io.width;
  if (!pr.has_source_solution()) return std::max(extent, 1.0) * 4.0;
  const BarenblattSpec spec = make_barenblatt(pr);
  const double tau = config_time_scale(pr);
  if (kind == InitKind::Barenblatt || kind == InitKind::PerturbedBarenblatt) return auto_radius(spec, tau * c.time.t_end);
  // Bumps spread like a source solution started about one time unit earlier.
  return extent + auto_radius(spec, tau * (c.time.t_end - c.time.t0 + 1.0));
}

State config_initial_state(const ExperimentConfig& c) {
  const Params pr = config_params(c);
  const auto grid = make_grid(pr.n, resolve_radius(c), c.grid.cells);
  return initial_condition(config_kind(c), pr, grid, init_options(c));
}

std::vector<Snapshot> run_evolution(const ExperimentConfig& c) {
  const Params pr = config_params(c);
  EvolveOptions eo;
  eo.t_end = config_time_scale(pr) * c.time.t_end;
  eo.save_every = c.time.save_every;
  eo.cfl = c.time.cfl;
  eo.max_steps = c.time.max_steps;
  if (config_kind(c) == InitKind::Barenblatt && pr.has_source_solution()) eo.reference = make_barenblatt(pr);
  return evolve(config_initial_state(c), eo);
}

std::string write_series(const ExperimentConfig& c, const std::string& stem, const std::vector<Snapshot>& snapshots) {
  namespace fs = std::filesystem;
  fs::create_directories(c.output.dir);
  const fs::path path = fs::path(c.output.dir) / (stem + "_series.csv");
  if (c.output.emit_csv) {
    std::ofstream out(path);
    write_csv_header(out);
    for (const Snapshot& s : snapshots) write_csv_row(out, s.record);
  }
  if (c.output.emit_snapshots) {
    std::ofstream out(fs::path(c.output.dir) / (stem + "_snapshots.csv"));
    out << "record,t,r,u\n";
    out.precision(17);
    for (std::size_t k = 0; k < snapshots.size(); ++k) {
      const State& st = snapshots[k].state;
      for (std::size_t i = 0; i < st.u.size(); ++i) {
        out << k << ',' << st.t << ',' << st.grid->centers[i] << ',' << st.u[i] << '\n';
      }
    }
  }
  return c.output.emit_csv ? path.string() : std::string();
}

Report error_report(const std::string& suite, const ExperimentConfig& c, const std::string& message) {
  Report rep;
  rep.suite = suite;
  try {
    rep.params = config_params(c);
  } catch (const Error&) {
  }
  rep.error = message;
  rep.checks.push_back(Check{"run_error", NAN, 0.0, 0.0, false, "run aborted"});
  return rep;
}

Report run_suite(const std::string& name, const ExperimentConfig& config) {
  validate(config);
  const auto& table = suite_table();
  auto it = std::find_if(table.begin(), table.end(), [&](const auto& e) { return e.first == name; });
  if (it == table.end()) throw Error(ErrorKind::ConfigError, "unknown suite '" + name + "'");
  const auto start = Clock::now();
  Report rep;
  rep.suite = name;
  rep.params = config_params(config);
  it->second(config, rep);
  if (rep.series_file && rep.series_file->empty()) rep.series_file.reset();
  rep.wallclock_s = std::chrono::duration<double>(Clock::now() - start).count();
  write_report(config, rep);
  return rep;
}

std::vector<Report> sweep(const std::vector<std::pair<std::string, ExperimentConfig>>& runs, unsigned jobs) {
  if (runs.empty()) throw Error(ErrorKind::ConfigError, "sweep needs at least one run");
  std::set<std::string> dirs;
  for (const auto& [suite, cfg] : runs) {
    const std::string d = std::filesystem::path(cfg.output.dir).lexically_normal().string();
    if (!dirs.insert(d).second) throw Error(ErrorKind::ConfigError, "duplicate output dir '" + cfg.output.dir + "'");
  }
  std::vector<Report> out(runs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < runs.size(); i = next++) {
      const auto& [suite, cfg] = runs[i];
      try {
        out[i] = run_suite(suite, cfg);
      } catch (const std::exception& e) {
        out[i] = error_report(suite, cfg, e.what());
        try {
          write_report(cfg, out[i]);
        } catch (const std::exception&) {
        }
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(runs.size())));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < n; ++k) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  return out;
}

double a_norm_fuzz(std::size_t samples, unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> slope(-3.0, 3.0);
  std::uniform_real_distribution<double> radius(0.01, 10.0);
  std::uniform_real_distribution<double> expo(1.1, 5.0);
  std::uniform_int_distribution<int> dim(1, 6);
  double worst = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    double v_r = slope(rng);
    if (std::abs(v_r) < 1e-3) v_r = 1e-3;
    const double v_rr = slope(rng);
    const double r = radius(rng);
    const double p = expo(rng);
    const int n = dim(rng);
    const RadialANorms a = radial_A_norms(v_r, v_rr, r, p, n);
    // Direct evaluation in the eigenbasis of the Hessian: radial eigenvalue
    // (p-1)|v_r|^{p-2} v_rr, n-1 angular eigenvalues |v_r|^{p-2} v_r / r.
    const double g = std::pow(std::abs(v_r), p - 2.0);
    const double lr = (p - 1.0) * g * v_rr;
    const double la = g * v_r / r;
    const double hess = lr * lr + (n - 1) * la * la;
    const double lap = lr + (n - 1) * la;
    const double res = std::abs(hess - a.traceless - lap * lap / n);
    worst = std::max(worst, res / std::max(hess, 1e-300));
  }
  return worst;
}

double d2N_series_mismatch(const std::vector<Snapshot>& snapshots) {
  if (snapshots.size() < 3) throw Error(ErrorKind::TooFewRecords, "need at least 3 snapshots");
  const std::vector<DiagRecord> recs = records_of(snapshots);
  double diff = 0.0, scale = 0.0;
  for (std::size_t k = 1; k + 1 < recs.size(); ++k) {
    const SecondDerivativeCheck sd =
        second_derivative_check(std::span<const DiagRecord>(recs).subspan(k - 1, 3), snapshots[k].state);
    diff = std::max(diff, std::abs(sd.d2N_fd - sd.d2N_formula));
    scale = std::max(scale, std::abs(sd.d2N_formula));
  }
  return scale > 0.0 ? diff / scale : diff;
}

}  // namespace dnde
