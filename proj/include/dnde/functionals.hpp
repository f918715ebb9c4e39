#pragma once

#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "dnde/special_functions.hpp"
#include "dnde/state.hpp"

namespace dnde {

/// One time slice of entropy diagnostics.
struct DiagRecord {
  double t = 0.0;
  double dt = 0.0;
  double mass = 0.0;
  double E_b = 0.0;
  double R_b = 0.0;
  double N_b = 0.0;
  double I_b = 0.0;
  double Q_b = 0.0;
  double W_b = 0.0;
  std::optional<double> err_exact_l1;
};

inline constexpr const char* kDiagCsvHeader = "t,dt,mass,E_b,R_b,N_b,I_b,Q_b,W_b,err_exact_l1";

void write_csv_header(std::ostream& os);
void write_csv_row(std::ostream& os, const DiagRecord& record);

double entropy_Eb(const State& state);
double renyi_Rb(const State& state);
double power_Nb(const State& state);

/// Pressure v = (gamma/b) u^b. For b < 0 the density is floored at u_floor
/// before the negative power and such cells are flagged.
struct PressureField {
  std::vector<double> v;
  std::vector<char> flagged;
  double eps = 0.0;  // regularisation used for |grad v|^{p-2}
};
PressureField pressure_field(const State& state);

/// Cells where the discrete pressure is smooth enough for second
/// derivatives. Excluded: cells within two cells of density below
/// 100 u_floor, of a floored cell, or (b > 0) of the free-boundary layer
/// v < 3 dr max|grad v|; and the wall cell, which sees the zero-flux face.
std::vector<char> regular_cells(const State& state, const PressureField& pf);

/// p-weighted Fisher information (b+1)/(gamma E_b) int |grad v|^p u, assembled
/// on faces from pressure gradients and face-averaged densities.
double fisher_Ib(const State& state);
double iso_Qb(const State& state);

/// (gamma/(b+1)) Q_b.
double j_functional(const State& state);

/// Entropy production W_b split into its traceless-Hessian and variance parts.
struct WProduction {
  double total = 0.0;
  double hessian_part = 0.0;
  double variance_part = 0.0;
};
WProduction w_production(const State& state);

/// Two closed expressions for dE_b/dt and the formula for d^2E_b/dt^2:
///   lap_form    = b int Delta_p v u^{b+1}
///   fisher_form = -(b(b+1)/gamma) int |grad v|^p u
///   second      = p b int [|grad v|^{2p-4} |grad grad v|_A^2 + b (Delta_p v)^2] u^{b+1}
struct EntropyRates {
  double lap_form = 0.0;
  double fisher_form = 0.0;
  double second = 0.0;
};
EntropyRates entropy_rates(const State& state);

/// All record fields for a state (err_exact_l1 left empty).
DiagRecord diagnose(const State& state);

/// max over interior records of |dR_b/dt - I_b| / I_b with centred differences.
double de_bruijn_residual(std::span<const DiagRecord> records);

struct SecondDerivativeCheck {
  double d2N_fd = 0.0;
  double d2N_formula = 0.0;             // (sigma b (b+1)/gamma) W_b
  double d2N_formula_flipped = 0.0;     // sign implied by writing dJ/dt = (gamma/(sigma b (b+1))) N''
  double mismatch = 0.0;
};

/// Three consecutive, uniformly spaced records and the state of the middle one.
SecondDerivativeCheck second_derivative_check(std::span<const DiagRecord> records, const State& middle);

struct SobolevCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

/// int |grad w|^p against S_{n,p} (int w^{p*})^{p/p*} after scaling w so that
/// w^{p*} has unit mass.
SobolevCheck sobolev_check(const RadialGrid& grid, std::span<const double> w, int n, double p);

struct GnCheck {
  GnPart part = GnPart::SlowDiffusion;
  double exponent = 0.0;
  double constant = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  double remainder_lhs = 0.0;
  /// The subtracted term C^{-p/theta} ||w||^{p/theta}; scale for remainder_lhs.
  double remainder_base = 0.0;
  /// (1/(p s gamma))^p times the power of the norm multiplying int W dt.
  double remainder_scale = 0.0;
};

GnCheck gn_check(const RadialGrid& grid, std::span<const double> w, const Params& params, double s);

inline double gn_remainder_rhs(const GnCheck& check, double w_integral) {
  return check.remainder_scale * w_integral;
}

/// u0 = w^{ps} / ||w||_{ps}^{ps}, the probability density attached to w.
std::vector<double> gn_initial_density(const RadialGrid& grid, std::span<const double> w, const Params& params,
                                       double s);

}  // namespace dnde
