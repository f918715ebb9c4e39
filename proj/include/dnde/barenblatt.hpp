#pragma once

#include "dnde/params.hpp"

namespace dnde {

/// Unit-mass Barenblatt profile B_b(xi) = (C -+ |xi|^q)^{1/b} together with
/// its normalisation constant.
struct BarenblattSpec {
  Params params;
  double C = 0.0;
};

/// Builds the spec with C from const_profile_C. Profiles exist on the whole
/// "good range" b > -p/(n(p-1)); functionals need b > -q/(n+q).
BarenblattSpec make_barenblatt(const Params& params);

double profile(const BarenblattSpec& spec, double xi);

/// Self-similar family U_{b,t}(x) = t^{-a/b} B_b(t^{-a/(nb)} x), t > 0.
double source_solution(const BarenblattSpec& spec, double x, double t);

/// U_{b,t} with the unit-coefficient profile solves du/dt = tau * Delta_p u^gamma.
/// tau = (|b|/(gamma q))^{p-1} a/(nb).
double time_scale(const Params& params);

/// Exact solution of du/dt = Delta_p u^gamma at time t: U_{b, t/tau}.
double exact_solution(const BarenblattSpec& spec, double x, double t);

/// Label time of the self-similar family that matches physical time t.
inline double label_time(const BarenblattSpec& spec, double t) { return t / time_scale(spec.params); }

/// Radius where |xi|^q = C, scaled to label time: the free boundary for b > 0
/// and the core width for b < 0.
double core_radius(const BarenblattSpec& spec, double label_t);

/// Smallest radius beyond which U_{b,label_t} carries less than `tail_mass`
/// (b < 0); the support radius for b > 0.
double tail_radius(const BarenblattSpec& spec, double label_t, double tail_mass);

struct ExactFunctionals {
  double E_b;
  double qmoment;
  double I_b;
  double N_b;
  double Q_b;
};

/// Closed-form entropy functionals of B_b.
ExactFunctionals exact_functionals(const BarenblattSpec& spec);

/// The same functionals for U_{b,t} at label time t.
ExactFunctionals exact_functionals(const BarenblattSpec& spec, double label_t);

/// Pressure v = (gamma/b) U^b of U_{b,t}, in closed form
/// (gamma/b)(C t^{-a} -+ |x|^q t^{-1/(p-1)}).
double exact_pressure(const BarenblattSpec& spec, double x, double t);

/// Delta_p of the pressure of U_{b,t}; constant in x on the support.
double exact_pressure_plaplacian(const BarenblattSpec& spec, double t);

}  // namespace dnde
