#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dnde/error.hpp"
#include "dnde/radial_grid.hpp"

using namespace dnde;

TEST_CASE("shell volumes sum to the ball volume") {
  const RadialGrid g = build_grid(3, 2.0, 100);
  double v = 0.0;
  for (double x : g.volumes) v += x;
  CHECK(v == doctest::Approx(4.0 / 3.0 * std::numbers::pi * 8.0).epsilon(1e-13));
  const RadialGrid l = build_grid(1, 2.0, 100);
  CHECK(integrate(l, std::vector<double>(100, 1.0)) == doctest::Approx(4.0));
}

TEST_CASE("cell averages integrate polynomials and kinks exactly") {
  const RadialGrid g = build_grid(3, 1.0, 32);
  const std::vector<double> u = cell_averages(g, [](double r) { return r * r; });
  CHECK(integrate(g, u) == doctest::Approx(4.0 * std::numbers::pi / 5.0).epsilon(1e-13));
  const std::vector<double> cut = {0.51};
  const std::vector<double> k = cell_averages(g, [](double r) { return std::max(0.0, 0.51 - r); }, cut);
  const double exact = 4.0 * std::numbers::pi * std::pow(0.51, 4) / 12.0;
  CHECK(integrate(g, k) == doctest::Approx(exact).epsilon(1e-12));
}

TEST_CASE("face gradients and p-Laplacian of simple fields") {
  const RadialGrid g = build_grid(3, 1.0, 64);
  const std::vector<double> v = sample_centers(g, [](double r) { return r * r; });
  const std::vector<double> grad = face_gradient(g, v);
  CHECK(grad.front() == 0.0);
  CHECK(grad.back() == 0.0);
  CHECK(grad[10] == doctest::Approx(2.0 * g.faces[10]).epsilon(1e-12));
  // Delta (r^2) = 2n away from the walls.
  const std::vector<double> lap = p_laplacian(g, v, 2.0, 0.0);
  for (std::size_t i = 1; i + 1 < g.m; ++i) CHECK(lap[i] == doctest::Approx(6.0).epsilon(1e-3));
  // Delta_p of |x|^q/q is n for any p.
  const double p = 3.0, q = p / (p - 1.0);
  const std::vector<double> w = sample_centers(g, [&](double r) { return std::pow(r, q) / q; });
  const std::vector<double> lp = p_laplacian(g, w, p, 0.0);
  for (std::size_t i = 4; i + 1 < g.m; ++i) CHECK(lp[i] == doctest::Approx(3.0).epsilon(2e-2));
}

TEST_CASE("A-norm decomposition holds pointwise") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int k = 0; k < 2000; ++k) {
    const double vr = u(rng), vrr = u(rng), r = 0.1 + std::abs(u(rng)), p = 1.2 + std::abs(u(rng));
    const int n = 1 + k % 5;
    const RadialANorms a = radial_A_norms(vr, vrr, r, p, n);
    CHECK(a.weighted_hessian == doctest::Approx(a.traceless + a.plaplacian * a.plaplacian / n).epsilon(1e-12));
    CHECK(a.traceless >= -1e-12 * a.weighted_hessian);
  }
}

TEST_CASE("traceless Hessian vanishes on |x|^q") {
  const RadialGrid g = build_grid(3, 1.0, 200);
  const double p = 3.0, q = 1.5;
  const std::vector<double> w = sample_centers(g, [&](double r) { return -std::pow(r, q); });
  const std::vector<double> t = traceless_hessian_A_norm(g, w, p, 0.0);
  for (std::size_t i = 10; i + 2 < g.m; ++i) CHECK(std::abs(t[i]) < 1e-3);
}

TEST_CASE("mesh errors") {
  CHECK_THROWS_AS(build_grid(0, 1.0, 100), Error);
  CHECK_THROWS_AS(build_grid(1, -1.0, 100), Error);
  CHECK_THROWS_AS(build_grid(1, 1.0, 4), Error);
  const RadialGrid g = build_grid(1, 1.0, 16);
  CHECK_THROWS_AS(integrate(g, std::vector<double>(3, 1.0)), Error);
}
