#include "dnde/radial_grid.hpp"

#include <algorithm>
#include <array>
#include <string>

#include "dnde/error.hpp"
#include "dnde/special_functions.hpp"

namespace dnde {
namespace {

void require_length(const RadialGrid& grid, std::size_t len, const char* what) {
  if (len != grid.m) {
    throw Error(ErrorKind::LengthMismatch, std::string(what) + ": expected " + std::to_string(grid.m) +
                                               " cell values, got " + std::to_string(len));
  }
}

double ball_volume(double sphere, int n, double r) { return sphere * std::pow(r, n) / n; }

// 5-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 5> kGaussNodes = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                               0.5384693101056831, 0.9061798459386640};
constexpr std::array<double, 5> kGaussWeights = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                                 0.4786286704993665, 0.2369268850561891};

double shell_integral(const std::function<double(double)>& f, int n, double lo, double hi) {
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  double acc = 0.0;
  for (std::size_t k = 0; k < kGaussNodes.size(); ++k) {
    const double r = mid + half * kGaussNodes[k];
    acc += kGaussWeights[k] * f(r) * std::pow(r, n - 1);
  }
  return acc * half;
}

}  // namespace

RadialGrid build_grid(int n, double R, std::size_t m) {
  if (n < 1) throw Error(ErrorKind::BadMesh, "dimension must be >= 1");
  if (!(R > 0.0) || !std::isfinite(R)) throw Error(ErrorKind::BadMesh, "radius must be positive and finite");
  if (m < 16) throw Error(ErrorKind::BadMesh, "need at least 16 cells, got " + std::to_string(m));

  RadialGrid g;
  g.n = n;
  g.R = R;
  g.m = m;
  g.dr = R / static_cast<double>(m);
  g.sphere = sphere_area(n);
  g.faces.resize(m + 1);
  g.areas.resize(m + 1);
  g.dual.assign(m + 1, 0.0);
  g.centers.resize(m);
  g.volumes.resize(m);
  for (std::size_t i = 0; i <= m; ++i) {
    g.faces[i] = i == m ? R : g.dr * static_cast<double>(i);
    g.areas[i] = g.sphere * std::pow(g.faces[i], n - 1);
  }
  for (std::size_t i = 0; i < m; ++i) {
    g.centers[i] = 0.5 * (g.faces[i] + g.faces[i + 1]);
    g.volumes[i] = ball_volume(g.sphere, n, g.faces[i + 1]) - ball_volume(g.sphere, n, g.faces[i]);
  }
  g.dual[0] = ball_volume(g.sphere, n, g.centers[0]);
  for (std::size_t j = 1; j < m; ++j) {
    g.dual[j] = ball_volume(g.sphere, n, g.centers[j]) - ball_volume(g.sphere, n, g.centers[j - 1]);
  }
  g.dual[m] = ball_volume(g.sphere, n, R) - ball_volume(g.sphere, n, g.centers[m - 1]);
  return g;
}

double integrate(const RadialGrid& grid, std::span<const double> cell_values) {
  require_length(grid, cell_values.size(), "integrate");
  double acc = 0.0;
  for (std::size_t i = 0; i < grid.m; ++i) acc += cell_values[i] * grid.volumes[i];
  return acc;
}

std::vector<double> sample_centers(const RadialGrid& grid, const std::function<double(double)>& f) {
  std::vector<double> out(grid.m);
  for (std::size_t i = 0; i < grid.m; ++i) out[i] = f(grid.centers[i]);
  return out;
}

std::vector<double> cell_averages(const RadialGrid& grid, const std::function<double(double)>& f,
                                  std::span<const double> breakpoints) {
  std::vector<double> out(grid.m);
  std::vector<double> cuts;
  for (std::size_t i = 0; i < grid.m; ++i) {
    const double lo = grid.faces[i];
    const double hi = grid.faces[i + 1];
    cuts.assign({lo});
    for (double bp : breakpoints) {
      if (bp > lo && bp < hi) cuts.push_back(bp);
    }
    std::sort(cuts.begin() + 1, cuts.end());
    cuts.push_back(hi);
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) acc += shell_integral(f, grid.n, cuts[k], cuts[k + 1]);
    out[i] = grid.sphere * acc / grid.volumes[i];
  }
  return out;
}

std::vector<double> face_gradient(const RadialGrid& grid, std::span<const double> f) {
  require_length(grid, f.size(), "face_gradient");
  std::vector<double> g(grid.m + 1, 0.0);
  const double inv = 1.0 / grid.dr;
  for (std::size_t j = 1; j < grid.m; ++j) g[j] = (f[j] - f[j - 1]) * inv;
  return g;
}

std::vector<double> p_laplacian(const RadialGrid& grid, std::span<const double> v, double p, double eps) {
  const std::vector<double> g = face_gradient(grid, v);
  std::vector<double> flux(grid.m + 1);
  for (std::size_t j = 0; j <= grid.m; ++j) flux[j] = grid.areas[j] * p_flux(g[j], p, eps);
  std::vector<double> out(grid.m);
  for (std::size_t i = 0; i < grid.m; ++i) out[i] = (flux[i + 1] - flux[i]) / grid.volumes[i];
  return out;
}

RadialHessian radial_hessian(const RadialGrid& grid, std::span<const double> v, double p, double eps) {
  const std::vector<double> g = face_gradient(grid, v);
  RadialHessian h;
  h.radial.resize(grid.m);
  h.angular.resize(grid.m);
  for (std::size_t i = 0; i < grid.m; ++i) {
    h.radial[i] = (p_flux(g[i + 1], p, eps) - p_flux(g[i], p, eps)) / grid.dr;
    // The outermost face is a wall, not a gradient sample; reuse the inner face there.
    const double gc = i + 1 < grid.m ? 0.5 * (g[i] + g[i + 1]) : g[i];
    h.angular[i] = p_flux(gc, p, eps) / grid.centers[i];
  }
  return h;
}

std::vector<double> traceless_hessian_A_norm(const RadialGrid& grid, std::span<const double> v, double p,
                                             double eps) {
  const RadialHessian h = radial_hessian(grid, v, p, eps);
  const double n = grid.n;
  std::vector<double> out(grid.m);
  for (std::size_t i = 0; i < grid.m; ++i) {
    const double lap = h.radial[i] + (n - 1.0) * h.angular[i];
    const double tr = h.radial[i] - lap / n;
    const double ta = h.angular[i] - lap / n;
    out[i] = tr * tr + (n - 1.0) * ta * ta;
  }
  return out;
}

RadialANorms radial_A_norms(double v_r, double v_rr, double r, double p, int n) {
  const double nd = n;
  const double w = std::pow(std::abs(v_r), p - 2.0);
  const double angular = v_r / r;
  RadialANorms out{};
  out.weighted_hessian = w * w * ((p - 1.0) * (p - 1.0) * v_rr * v_rr + (nd - 1.0) * angular * angular);
  out.plaplacian = (p - 1.0) * w * v_rr + (nd - 1.0) * w * angular;
  const double tr = w * v_rr - out.plaplacian / (nd * (p - 1.0));
  const double ta = w * angular - out.plaplacian / nd;
  out.traceless = (p - 1.0) * (p - 1.0) * tr * tr + (nd - 1.0) * ta * ta;
  return out;
}

}  // namespace dnde
