#include "dnde/params.hpp"

#include <cmath>
#include <cstdio>

#include "dnde/error.hpp"

namespace dnde {

const char* to_string(Regime regime) {
  switch (regime) {
    case Regime::SlowDiffusion: return "SlowDiffusion";
    case Regime::FastDiffusionFisherRange: return "FastDiffusionFisherRange";
    case Regime::SobolevCritical: return "SobolevCritical";
    case Regime::MassRangeOnly: return "MassRangeOnly";
    case Regime::OutOfRange: return "OutOfRange";
  }
  return "Unknown";
}

Params derive(int n, double p, double gamma) {
  if (n < 1) throw Error(ErrorKind::BadExponent, "dimension must be >= 1");
  if (!(p > 1.0) || !std::isfinite(p)) throw Error(ErrorKind::BadExponent, "p must be finite and > 1");
  if (!std::isfinite(gamma)) throw Error(ErrorKind::BadExponent, "gamma must be finite");

  Params out;
  out.n = n;
  out.p = p;
  out.gamma = gamma;
  out.b = gamma - 1.0 / (p - 1.0);
  if (std::abs(out.b) <= kRegimeTolerance) {
    throw Error(ErrorKind::DegenerateB, "gamma = 1/(p-1) gives b = 0");
  }
  out.q = p / (p - 1.0);

  const double nd = static_cast<double>(n);
  const bool critical = p < nd && std::abs(out.b + 1.0 / nd) <= kRegimeTolerance;
  if (critical) {
    // Snap onto the boundary so that sigma = 1 and b(1 - sigma) = 0 hold exactly.
    out.b = -1.0 / nd;
    out.sigma = 1.0;
    out.a = -1.0;
  } else {
    out.sigma = -(p - 1.0) - p / (nd * out.b);
    out.a = nd * out.b / ((p - 1.0) * nd * out.b + p);
  }
  out.regime = classify_regime(out);
  return out;
}

Regime classify_regime(const Params& params) {
  const double nd = static_cast<double>(params.n);
  const double b = params.b;
  if (!(params.gamma > 0.0) || std::abs(b) <= kRegimeTolerance) return Regime::OutOfRange;
  if (b > 0.0) return Regime::SlowDiffusion;
  if (params.p < nd && std::abs(b + 1.0 / nd) <= kRegimeTolerance) return Regime::SobolevCritical;
  const double fisher_edge = -params.q / (nd + params.q);
  if (b > fisher_edge) return Regime::FastDiffusionFisherRange;
  const double mass_edge = -params.p / (nd * (params.p - 1.0));
  if (b > mass_edge) return Regime::MassRangeOnly;
  return Regime::OutOfRange;
}

double gn_s_of_b(const Params& params) {
  const double denom = params.p * params.b + 1.0;
  if (std::abs(denom) <= kRegimeTolerance) throw Error(ErrorKind::DegenerateB, "p b + 1 = 0");
  return 1.0 / denom;
}

double b_of_gn_s(int n, double p, double s) {
  (void)n;
  if (!(p > 1.0)) throw Error(ErrorKind::BadExponent, "p must be > 1");
  if (s == 0.0 || !std::isfinite(s)) throw Error(ErrorKind::DegenerateB, "s must be finite and nonzero");
  return (1.0 / s - 1.0) / p;
}

std::string describe(const Params& params) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "n=%d p=%g gamma=%g (b=%.6g q=%.6g sigma=%.6g a=%.6g, %s)", params.n,
                params.p, params.gamma, params.b, params.q, params.sigma, params.a,
                to_string(params.regime));
  return buf;
}

}  // namespace dnde
