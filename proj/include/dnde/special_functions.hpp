#pragma once

#include <optional>

#include "dnde/params.hpp"

namespace dnde {

/// log Gamma(x) for x > 0 (Lanczos, g = 7, 9 terms).
double ln_gamma(double x);
double gamma_fn(double x);
double ln_beta(double x, double y);
double beta_fn(double x, double y);

/// |S^{n-1}| = 2 pi^{n/2} / Gamma(n/2).
double sphere_area(int n);

/// Integral of the unit-coefficient profile: (1-|x|^q)_+^{1/b} for b > 0,
/// (1+|x|^q)^{1/b} for b < 0.
double ln_const_D_b(const Params& params);
double const_D_b(const Params& params);

/// Unit-mass normalisation C = D_b^{-bq/(nb+q)} of the Barenblatt profile.
double ln_const_profile_C(const Params& params);
double const_profile_C(const Params& params);

/// The two closed forms of the isoperimetric constant C_{1,b} (b < 0) or
/// C_{2,b} (b > 0). They differ only through Gamma(x+1) = x Gamma(x).
struct IsoperimetricForms {
  double ln_direct_form;
  double ln_shifted_form;
};
IsoperimetricForms isoperimetric_forms(const Params& params);

/// Isoperimetric constant; throws if the two forms disagree beyond 1e-12.
double ln_const_isoperimetric(const Params& params);
double const_isoperimetric(const Params& params);

/// Sharp L^p Sobolev constant S_{n,p}, 1 < p < n.
double ln_sobolev_constant(int n, double p);
double sobolev_constant(int n, double p);

/// Classical p = 2 Sobolev constant n(n-2) pi (Gamma(n/2)/Gamma(n))^{2/n}.
double sobolev_constant_p2_classical(int n);

/// S_{n,p} reached from C_{1,-1/n} through the substitution u = w^{p*}:
/// S = (gamma/(b+1)) ((p-1)(n-p)/(p(n-p+1)))^p C_{1,-1/n}.
double sobolev_from_isoperimetric(int n, double p);

/// (p(n-p+1)/((p-1)(n-p)))^p C_{1,-1/n}; kept only to demonstrate that this
/// arrangement of the prefactor does not reproduce S_{n,p}.
double sobolev_inverted_prefactor(int n, double p);

enum class GnPart { FastDiffusion, SlowDiffusion };

/// GN interpolation exponent (theta for the fast-diffusion part, vartheta for
/// the slow-diffusion part) evaluated by two algebraically distinct routes.
struct GnExponent {
  GnPart part;
  double value;        // closed form in (n, p, s)
  double value_sigma;  // route through sigma: 1/(s(b+1)(sigma-1)+1) or p/((1-sigma)((p-1)s+1))
};

GnExponent gn_exponents(const Params& params, double s);

/// GN constant C_1 or C_2, returned in log form alongside the linear value.
struct GnConstant {
  GnPart part;
  double exponent;
  double ln_value;
  double value;
};
GnConstant gn_constant(const Params& params, double s);

/// Every closed-form constant for one parameter set. Optional entries are
/// absent when the regime does not define them.
struct SharpConstants {
  double D_b;
  double C_profile;
  std::optional<double> C_iso;
  std::optional<double> S_sobolev;
  std::optional<double> gn_s;
  std::optional<double> gn_exponent;
  std::optional<double> C_gn;
};
SharpConstants compute_constants(const Params& params);

}  // namespace dnde
