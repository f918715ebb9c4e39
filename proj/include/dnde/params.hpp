#pragma once

#include <string>

namespace dnde {

enum class Regime {
  SlowDiffusion,             // b > 0
  FastDiffusionFisherRange,  // -q/(n+q) < b < 0
  SobolevCritical,           // b == -1/n, p < n
  MassRangeOnly,             // -p/(n(p-1)) < b <= -q/(n+q)
  OutOfRange,
};

const char* to_string(Regime regime);

/// Exponent cluster of the doubly nonlinear diffusion equation
/// du/dt = div(|grad u^gamma|^{p-2} grad u^gamma) on R^n.
///
/// Everything downstream is written in terms of the derived exponents:
///   b     = gamma - 1/(p-1)         (pressure exponent, v = (gamma/b) u^b)
///   q     = p/(p-1)                 (dual exponent)
///   sigma = -(p-1) - p/(n b)        (entropy power exponent, N = E^sigma)
///   a     = n b / ((p-1) n b + p)   (= -1/sigma)
struct Params {
  int n = 1;
  double p = 2.0;
  double gamma = 2.0;
  double b = 1.0;
  double q = 2.0;
  double sigma = -3.0;
  double a = 1.0 / 3.0;
  Regime regime = Regime::SlowDiffusion;

  bool slow() const { return b > 0.0; }
  /// True when the Barenblatt profile has finite Fisher information and q-moment.
  bool finite_fisher() const {
    return regime == Regime::SlowDiffusion || regime == Regime::FastDiffusionFisherRange ||
           regime == Regime::SobolevCritical;
  }
  /// True when a unit-mass source-type solution exists.
  bool has_source_solution() const { return finite_fisher() || regime == Regime::MassRangeOnly; }
};

/// Absolute tolerance used when comparing b against regime boundaries.
inline constexpr double kRegimeTolerance = 1e-12;

Params derive(int n, double p, double gamma);

Regime classify_regime(const Params& params);

/// GN exponent s = 1/(p b + 1) linking u = w^{p s}.
double gn_s_of_b(const Params& params);
double b_of_gn_s(int n, double p, double s);

std::string describe(const Params& params);

}  // namespace dnde
