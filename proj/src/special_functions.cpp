#include "dnde/special_functions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "dnde/error.hpp"

namespace dnde {
namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoeffs = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7,
};

void require_positive(double x, const char* what) {
  if (!(x > 0.0)) {
    throw Error(ErrorKind::NonPositiveArgument, std::string(what) + " requires a positive argument, got " +
                                                    std::to_string(x));
  }
}

void require_source(const Params& params) {
  if (!params.has_source_solution()) {
    throw Error(ErrorKind::OutOfRangeRegime, "no unit-mass Barenblatt profile for " + describe(params));
  }
}

void require_fisher(const Params& params) {
  if (!params.finite_fisher()) {
    throw Error(ErrorKind::OutOfRangeRegime, "Fisher information of the Barenblatt profile is infinite for " +
                                                 describe(params));
  }
}

// ln of q(b+1)/(nb+q(b+1)), the ratio E_b(B)/C.
double ln_entropy_ratio(const Params& params) {
  const double n = params.n;
  return std::log(params.q * (params.b + 1.0) / (n * params.b + params.q * (params.b + 1.0)));
}

}  // namespace

double ln_gamma(double x) {
  require_positive(x, "ln_gamma");
  if (x < 0.5) return ln_gamma(x + 1.0) - std::log(x);
  const double z = x - 1.0;
  double sum = kLanczosCoeffs[0];
  for (std::size_t k = 1; k < kLanczosCoeffs.size(); ++k) sum += kLanczosCoeffs[k] / (z + static_cast<double>(k));
  const double t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(sum);
}

double gamma_fn(double x) { return std::exp(ln_gamma(x)); }

double ln_beta(double x, double y) {
  require_positive(x, "beta_fn");
  require_positive(y, "beta_fn");
  return ln_gamma(x) + ln_gamma(y) - ln_gamma(x + y);
}

double beta_fn(double x, double y) { return std::exp(ln_beta(x, y)); }

double sphere_area(int n) {
  if (n < 1) throw Error(ErrorKind::NonPositiveArgument, "sphere_area requires n >= 1");
  const double half = 0.5 * n;
  return 2.0 * std::exp(half * std::log(std::numbers::pi) - ln_gamma(half));
}

double ln_const_D_b(const Params& params) {
  require_source(params);
  const double n = params.n;
  const double q = params.q;
  const double b = params.b;
  const double ln_pi = std::log(std::numbers::pi);
  if (b > 0.0) {
    return std::log(2.0 / q) + 0.5 * n * ln_pi - ln_gamma(0.5 * n) + ln_gamma(n / q) + ln_gamma(1.0 / b + 1.0) -
           ln_gamma(n / q + 1.0 / b + 1.0);
  }
  return std::log(2.0 / q) + 0.5 * n * ln_pi + ln_gamma(n / q) + ln_gamma(-n / q - 1.0 / b) - ln_gamma(0.5 * n) -
         ln_gamma(-1.0 / b);
}

double const_D_b(const Params& params) { return std::exp(ln_const_D_b(params)); }

double ln_const_profile_C(const Params& params) {
  const double n = params.n;
  return -params.b * params.q / (n * params.b + params.q) * ln_const_D_b(params);
}

double const_profile_C(const Params& params) { return std::exp(ln_const_profile_C(params)); }

IsoperimetricForms isoperimetric_forms(const Params& params) {
  require_fisher(params);
  const double n = params.n;
  const double p = params.p;
  const double q = params.q;
  const double b = params.b;
  const double gamma = params.gamma;

  // Gamma factors that depend on the sign of b.
  double ln_num_b = 0.0;
  double ln_den_b = 0.0;
  if (b > 0.0) {
    ln_num_b = ln_gamma(1.0 / b + 1.0);
    ln_den_b = ln_gamma(n / q + 1.0 / b + 1.0);
  } else {
    ln_num_b = ln_gamma(-n / q - 1.0 / b);
    ln_den_b = ln_gamma(-1.0 / b);
  }
  const double common = (p - 1.0) * std::log(q * gamma / std::abs(b)) + 0.5 * p * std::log(std::numbers::pi) +
                        std::log(n) + params.sigma * ln_entropy_ratio(params);

  IsoperimetricForms forms{};
  forms.ln_direct_form =
      common + (p / n) * (ln_gamma(n / q + 1.0) + ln_num_b - ln_gamma(0.5 * n + 1.0) - ln_den_b);
  forms.ln_shifted_form = common + (p / n) * std::log(2.0 / q) +
                        (p / n) * (ln_gamma(n / q) + ln_num_b - ln_gamma(0.5 * n) - ln_den_b);
  return forms;
}

double ln_const_isoperimetric(const Params& params) {
  const IsoperimetricForms forms = isoperimetric_forms(params);
  // Both are logs of the same positive number; compare in linear relative terms.
  const double rel = std::abs(std::expm1(forms.ln_direct_form - forms.ln_shifted_form));
  if (rel > 1e-12) {
    throw Error(ErrorKind::RangeMismatch, "isoperimetric constant forms disagree by " + std::to_string(rel));
  }
  return forms.ln_shifted_form;
}

double const_isoperimetric(const Params& params) { return std::exp(ln_const_isoperimetric(params)); }

double ln_sobolev_constant(int n, double p) {
  const double nd = n;
  if (!(p > 1.0) || !(p < nd)) throw Error(ErrorKind::BadExponent, "Sobolev constant needs 1 < p < n");
  const double q = p / (p - 1.0);
  return std::log(nd) + 0.5 * p * std::log(std::numbers::pi) + (p - 1.0) * std::log((nd - p) / (p - 1.0)) +
         (p / nd) * (ln_gamma(nd / q + 1.0) + ln_gamma(nd / p) - ln_gamma(0.5 * nd + 1.0) - ln_gamma(nd));
}

double sobolev_constant(int n, double p) { return std::exp(ln_sobolev_constant(n, p)); }

double sobolev_constant_p2_classical(int n) {
  if (n < 3) throw Error(ErrorKind::BadExponent, "classical Sobolev constant needs n >= 3");
  const double nd = n;
  return nd * (nd - 2.0) * std::numbers::pi * std::exp((2.0 / nd) * (ln_gamma(0.5 * nd) - ln_gamma(nd)));
}

namespace {

Params critical_params(int n, double p) {
  const double nd = n;
  if (!(p > 1.0) || !(p < nd)) throw Error(ErrorKind::BadExponent, "Sobolev constant needs 1 < p < n");
  return derive(n, p, 1.0 / (p - 1.0) - 1.0 / nd);
}

}  // namespace

double sobolev_from_isoperimetric(int n, double p) {
  const Params params = critical_params(n, p);
  const double nd = n;
  const double ratio = (p - 1.0) * (nd - p) / (p * (nd - p + 1.0));
  return params.gamma / (params.b + 1.0) * std::pow(ratio, p) * const_isoperimetric(params);
}

double sobolev_inverted_prefactor(int n, double p) {
  const Params params = critical_params(n, p);
  const double nd = n;
  const double ratio = p * (nd - p + 1.0) / ((p - 1.0) * (nd - p));
  return std::pow(ratio, p) * const_isoperimetric(params);
}

GnExponent gn_exponents(const Params& params, double s) {
  const double n = params.n;
  const double p = params.p;
  const double b = params.b;
  const double expected_s = gn_s_of_b(params);
  if (std::abs(s - expected_s) > 1e-12 * std::max(1.0, std::abs(expected_s))) {
    throw Error(ErrorKind::RangeMismatch, "s = " + std::to_string(s) + " is not 1/(pb+1) = " +
                                              std::to_string(expected_s));
  }

  GnExponent out{};
  if (b > -1.0 / n && b < 0.0 && params.regime != Regime::SobolevCritical) {
    const double s_max = p < n ? n / (n - p) : INFINITY;
    if (!(s > 1.0 && s < s_max) || !(params.sigma > 1.0)) {
      throw Error(ErrorKind::RangeMismatch, "fast-diffusion GN part needs 1 < s < n/(n-p) and sigma > 1");
    }
    out.part = GnPart::FastDiffusion;
    out.value = (1.0 / s) * n * (s - 1.0) / ((p - 1.0) * n * (1.0 - s) + p * ((p - 1.0) * s + 1.0));
    out.value_sigma = 1.0 / (s * (b + 1.0) * (params.sigma - 1.0) + 1.0);
  } else if (b > 0.0) {
    if (!(s > 0.0 && s < 1.0) || !(params.sigma < 0.0)) {
      throw Error(ErrorKind::RangeMismatch, "slow-diffusion GN part needs 0 < s < 1 and sigma < 0");
    }
    out.part = GnPart::SlowDiffusion;
    out.value = (1.0 / ((p - 1.0) * s + 1.0)) * n * (1.0 - s) / (n * (1.0 - s) + p * s);
    out.value_sigma = p / ((1.0 - params.sigma) * ((p - 1.0) * s + 1.0));
  } else {
    throw Error(ErrorKind::RangeMismatch, "GN inequalities need -1/n < b < 0 or b > 0; got " + describe(params));
  }
  if (std::abs(out.value - out.value_sigma) > 1e-12 * std::abs(out.value)) {
    throw Error(ErrorKind::RangeMismatch, "GN exponent routes disagree");
  }
  if (!(out.value > 0.0 && out.value < 1.0)) {
    throw Error(ErrorKind::RangeMismatch, "GN exponent outside (0,1)");
  }
  return out;
}

GnConstant gn_constant(const Params& params, double s) {
  const GnExponent exponent = gn_exponents(params, s);
  const double p = params.p;
  const double ln_bracket = std::log(params.b + 1.0) + (p - 1.0) * std::log(params.gamma) -
                            ln_const_isoperimetric(params) + p * std::log(p * s);
  GnConstant out{};
  out.part = exponent.part;
  out.exponent = exponent.value;
  out.ln_value = exponent.value / p * ln_bracket;
  out.value = std::exp(out.ln_value);
  return out;
}

SharpConstants compute_constants(const Params& params) {
  SharpConstants out{};
  out.D_b = const_D_b(params);
  out.C_profile = const_profile_C(params);
  if (params.finite_fisher()) out.C_iso = const_isoperimetric(params);
  if (params.regime == Regime::SobolevCritical) out.S_sobolev = sobolev_constant(params.n, params.p);
  const double nd = params.n;
  const bool gn_fast = params.b > -1.0 / nd && params.b < 0.0 && params.regime != Regime::SobolevCritical &&
                       params.sigma > 1.0;
  if (params.finite_fisher() && (params.b > 0.0 || gn_fast)) {
    const double s = gn_s_of_b(params);
    try {
      const GnConstant c = gn_constant(params, s);
      out.gn_s = s;
      out.gn_exponent = c.exponent;
      out.C_gn = c.value;
    } catch (const Error&) {
      // s outside the admissible window: the GN pair is simply not defined here.
    }
  }
  return out;
}

}  // namespace dnde
