#include "dnde/barenblatt.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dnde/error.hpp"
#include "dnde/special_functions.hpp"

namespace dnde {
namespace {

void require_time(double t) {
  if (!(t > 0.0)) throw Error(ErrorKind::NonPositiveTime, "time must be positive, got " + std::to_string(t));
}

}  // namespace

BarenblattSpec make_barenblatt(const Params& params) {
  if (!params.has_source_solution()) {
    throw Error(ErrorKind::OutOfRangeRegime, "no source-type solution for " + describe(params));
  }
  return BarenblattSpec{params, const_profile_C(params)};
}

double profile(const BarenblattSpec& spec, double xi) {
  const Params& pr = spec.params;
  const double xq = std::pow(std::abs(xi), pr.q);
  if (pr.b > 0.0) {
    const double base = spec.C - xq;
    return base > 0.0 ? std::pow(base, 1.0 / pr.b) : 0.0;
  }
  return std::pow(spec.C + xq, 1.0 / pr.b);
}

double source_solution(const BarenblattSpec& spec, double x, double t) {
  require_time(t);
  const Params& pr = spec.params;
  const double n = pr.n;
  return std::pow(t, -pr.a / pr.b) * profile(spec, std::pow(t, -pr.a / (n * pr.b)) * x);
}

double time_scale(const Params& params) {
  const double n = params.n;
  return std::pow(std::abs(params.b) / (params.gamma * params.q), params.p - 1.0) * params.a / (n * params.b);
}

double exact_solution(const BarenblattSpec& spec, double x, double t) {
  require_time(t);
  return source_solution(spec, x, t / time_scale(spec.params));
}

double core_radius(const BarenblattSpec& spec, double label_t) {
  require_time(label_t);
  const Params& pr = spec.params;
  const double n = pr.n;
  return std::pow(spec.C, 1.0 / pr.q) * std::pow(label_t, pr.a / (n * pr.b));
}

double tail_radius(const BarenblattSpec& spec, double label_t, double tail_mass) {
  const Params& pr = spec.params;
  if (pr.b > 0.0) return core_radius(spec, label_t);
  if (!(tail_mass > 0.0)) throw Error(ErrorKind::BadOption, "tail mass must be positive");
  // Bound the tail by (C + xi^q)^{1/b} <= xi^{q/b}; integrable since n + q/b < 0.
  const double n = pr.n;
  const double k = n + pr.q / pr.b;
  const double xi = std::pow(tail_mass * (-k) / sphere_area(pr.n), 1.0 / k);
  return std::max(xi, 4.0 * std::pow(spec.C, 1.0 / pr.q)) * std::pow(label_t, pr.a / (n * pr.b));
}

ExactFunctionals exact_functionals(const BarenblattSpec& spec) {
  const Params& pr = spec.params;
  if (!pr.finite_fisher()) {
    throw Error(ErrorKind::OutOfRangeRegime, "q-moment and Fisher information diverge for " + describe(pr));
  }
  const double n = pr.n;
  const double denom = n * pr.b + pr.q * (pr.b + 1.0);
  ExactFunctionals out{};
  out.E_b = pr.q * (pr.b + 1.0) / denom * spec.C;
  out.qmoment = std::abs(n * pr.b) / denom * spec.C;
  out.I_b = std::pow(pr.q * pr.gamma / std::abs(pr.b), pr.p - 1.0) * n;
  out.N_b = std::pow(out.E_b, pr.sigma);
  out.Q_b = out.N_b * out.I_b;
  return out;
}

ExactFunctionals exact_functionals(const BarenblattSpec& spec, double label_t) {
  require_time(label_t);
  const Params& pr = spec.params;
  const double n = pr.n;
  ExactFunctionals out = exact_functionals(spec);
  out.E_b *= std::pow(label_t, -pr.a);
  out.qmoment *= std::pow(label_t, pr.a * pr.q / (n * pr.b));
  out.N_b = std::pow(out.E_b, pr.sigma);
  out.I_b = out.Q_b / out.N_b;
  return out;
}

double exact_pressure(const BarenblattSpec& spec, double x, double t) {
  require_time(t);
  const Params& pr = spec.params;
  const double xq = std::pow(std::abs(x), pr.q);
  const double drift = xq * std::pow(t, -1.0 / (pr.p - 1.0));
  const double level = spec.C * std::pow(t, -pr.a);
  if (pr.b > 0.0) {
    if (drift > level) {
      throw Error(ErrorKind::OutsideSupport, "x = " + std::to_string(x) + " lies outside the support");
    }
    return pr.gamma / pr.b * (level - drift);
  }
  return pr.gamma / pr.b * (level + drift);
}

double exact_pressure_plaplacian(const BarenblattSpec& spec, double t) {
  require_time(t);
  const Params& pr = spec.params;
  const double c2 = pr.gamma / std::abs(pr.b) * std::pow(t, -1.0 / (pr.p - 1.0));
  return -static_cast<double>(pr.n) * std::pow(c2 * pr.q, pr.p - 1.0);
}

}  // namespace dnde
