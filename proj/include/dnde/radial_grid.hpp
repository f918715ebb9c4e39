#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace dnde {

/// Uniform radial finite-volume mesh of the ball B_R in R^n.
///
/// Cell i spans [faces[i], faces[i+1]] and carries the exact shell volume
/// |S^{n-1}| (r_{i+1}^n - r_i^n)/n, so that integrals of radial fields are
/// integrals over R^n restricted to the ball.
struct RadialGrid {
  int n = 1;
  double R = 1.0;
  std::size_t m = 0;
  double dr = 0.0;
  double sphere = 0.0;
  std::vector<double> faces;    // m + 1 radii
  std::vector<double> centers;  // m midpoints
  std::vector<double> volumes;  // m shell volumes
  std::vector<double> areas;    // m + 1 face areas |S^{n-1}| r^{n-1}
  std::vector<double> dual;     // m + 1 dual-cell volumes between adjacent centers (0 at the ends)
};

RadialGrid build_grid(int n, double R, std::size_t m);

double integrate(const RadialGrid& grid, std::span<const double> cell_values);

std::vector<double> sample_centers(const RadialGrid& grid, const std::function<double(double)>& f);

/// Shell averages of f computed with Gauss-Legendre quadrature in r; cells
/// are split at the given breakpoints so that kinks are integrated exactly.
std::vector<double> cell_averages(const RadialGrid& grid, const std::function<double(double)>& f,
                                  std::span<const double> breakpoints = {});

/// Face gradients; the faces at r = 0 and r = R carry 0.
std::vector<double> face_gradient(const RadialGrid& grid, std::span<const double> f);

/// Regularised p-Laplacian flux (g^2 + eps^2)^{(p-2)/2} g.
inline double p_flux(double g, double p, double eps) {
  if (p == 2.0) return g;
  const double s = g * g + eps * eps;
  if (p == 3.0) return std::sqrt(s) * g;
  if (p == 4.0) return s * g;
  return std::pow(s, 0.5 * (p - 2.0)) * g;
}

/// Finite-volume Delta_p v at cell centres.
std::vector<double> p_laplacian(const RadialGrid& grid, std::span<const double> v, double p, double eps);

/// Per-cell radial p-Hessian quantities of a field v:
///   radial  = (|v_r|^{p-2} v_r)_r            = (p-1)|v_r|^{p-2} v_rr
///   angular = |v_r|^{p-2} v_r / r
/// so that the pointwise p-Laplacian is radial + (n-1) angular.
struct RadialHessian {
  std::vector<double> radial;
  std::vector<double> angular;
};
RadialHessian radial_hessian(const RadialGrid& grid, std::span<const double> v, double p, double eps);

/// |T|_A^2 for the traceless A-Hessian T = |grad v|^{p-2} grad grad v - (1/n) Delta_p v a.
std::vector<double> traceless_hessian_A_norm(const RadialGrid& grid, std::span<const double> v, double p,
                                             double eps);

/// Pointwise algebra of the radial A-norm decomposition for one tuple.
struct RadialANorms {
  double weighted_hessian;  // |grad v|^{2p-4} |grad grad v|_A^2
  double plaplacian;        // Delta_p v
  double traceless;         // |T|_A^2
};
RadialANorms radial_A_norms(double v_r, double v_rr, double r, double p, int n);

}  // namespace dnde
