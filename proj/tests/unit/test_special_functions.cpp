#include <doctest.h>

#include <cmath>
#include <numbers>

#include <vector>

#include "dnde/error.hpp"
#include "dnde/special_functions.hpp"

using namespace dnde;

namespace {
struct Case {
  int n;
  double p, g;
};
}  // namespace

TEST_CASE("Lanczos log-gamma against the C library") {
  for (double x = 0.05; x < 60.0; x *= 1.37) {
    CHECK(ln_gamma(x) == doctest::Approx(std::lgamma(x)).epsilon(1e-13));
    if (x < 30.0) CHECK(gamma_fn(x) == doctest::Approx(std::tgamma(x)).epsilon(1e-12));
  }
  CHECK(gamma_fn(0.5) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-14));
  CHECK_THROWS_AS(ln_gamma(0.0), Error);
  CHECK_THROWS_AS(ln_gamma(-1.5), Error);
}

TEST_CASE("beta function") {
  CHECK(beta_fn(2.0, 3.0) == doctest::Approx(1.0 / 12.0).epsilon(1e-13));
  CHECK(beta_fn(0.5, 0.5) == doctest::Approx(std::numbers::pi).epsilon(1e-13));
  CHECK(ln_beta(7.5, 2.25) == doctest::Approx(std::lgamma(7.5) + std::lgamma(2.25) - std::lgamma(9.75)).epsilon(1e-13));
}

TEST_CASE("sphere areas") {
  CHECK(sphere_area(1) == doctest::Approx(2.0));
  CHECK(sphere_area(2) == doctest::Approx(2.0 * std::numbers::pi));
  CHECK(sphere_area(3) == doctest::Approx(4.0 * std::numbers::pi));
  CHECK(sphere_area(4) == doctest::Approx(2.0 * std::numbers::pi * std::numbers::pi));
}

TEST_CASE("D_b by brute-force quadrature") {
  // n = 1, b = 1, q = 2: int (1 - x^2)_+ dx = 4/3.
  CHECK(const_D_b(derive(1, 2.0, 2.0)) == doctest::Approx(4.0 / 3.0).epsilon(1e-13));
  // n = 3, b = -1/4, q = 2: 4 pi int r^2 (1 + r^2)^{-4} dr = pi^2/8.
  CHECK(const_D_b(derive(3, 2.0, 0.75)) == doctest::Approx(std::numbers::pi * std::numbers::pi / 8.0).epsilon(1e-12));
}

TEST_CASE("isoperimetric constant for n=1 p=2 gamma=2 is 125/9 by both forms") {
  const Params p = derive(1, 2.0, 2.0);
  const IsoperimetricForms f = isoperimetric_forms(p);
  CHECK(std::exp(f.ln_direct_form) == doctest::Approx(125.0 / 9.0).epsilon(1e-12));
  CHECK(std::exp(f.ln_shifted_form) == doctest::Approx(125.0 / 9.0).epsilon(1e-12));
  CHECK(const_isoperimetric(p) == doctest::Approx(125.0 / 9.0).epsilon(1e-12));
}

TEST_CASE("isoperimetric forms agree across regimes") {
  for (auto [n, pp, g] : std::vector<Case>{{3, 2.0, 2.0}, {3, 3.0, 1.0}, {3, 2.0, 0.75}, {2, 2.5, 1.2}}) {
    const IsoperimetricForms f = isoperimetric_forms(derive(n, pp, g));
    CHECK(f.ln_direct_form == doctest::Approx(f.ln_shifted_form).epsilon(1e-12));
  }
  CHECK_THROWS_AS(const_isoperimetric(derive(3, 2.0, 0.5)), Error);
}

TEST_CASE("Sobolev constants") {
  CHECK(sobolev_constant(3, 2.0) == doctest::Approx(3.0 * std::pow(std::numbers::pi / 2.0, 4.0 / 3.0)).epsilon(1e-10));
  CHECK(sobolev_constant(3, 2.0) == doctest::Approx(5.47790408953133).epsilon(1e-12));
  for (int n = 3; n <= 6; ++n) {
    CHECK(sobolev_constant(n, 2.0) == doctest::Approx(sobolev_constant_p2_classical(n)).epsilon(1e-12));
  }
  for (auto [n, p] : {std::pair{3, 2.0}, {4, 2.0}, {5, 3.0}}) {
    CHECK(sobolev_from_isoperimetric(n, p) == doctest::Approx(sobolev_constant(n, p)).epsilon(1e-10));
    CHECK(std::abs(sobolev_inverted_prefactor(n, p) / sobolev_constant(n, p) - 1.0) > 0.1);
  }
  CHECK_THROWS_AS(sobolev_constant(2, 2.0), Error);
  CHECK_THROWS_AS(sobolev_constant_p2_classical(2), Error);
}

TEST_CASE("GN exponents by two routes") {
  const GnExponent slow = gn_exponents(derive(1, 2.0, 2.0), 1.0 / 3.0);
  CHECK(slow.part == GnPart::SlowDiffusion);
  CHECK(slow.value == doctest::Approx(slow.value_sigma).epsilon(1e-12));
  CHECK(slow.value == doctest::Approx(0.375));
  const GnExponent fast = gn_exponents(derive(3, 2.0, 0.75), 2.0);
  CHECK(fast.part == GnPart::FastDiffusion);
  CHECK(fast.value == doctest::Approx(fast.value_sigma).epsilon(1e-12));
  CHECK(fast.value == doctest::Approx(0.5));
  CHECK_THROWS_AS(gn_exponents(derive(1, 2.0, 2.0), 0.5), Error);
  CHECK_THROWS_AS(gn_exponents(derive(3, 2.0, 0.5), gn_s_of_b(derive(3, 2.0, 0.5))), Error);
}

TEST_CASE("mass-exponent form of the fast-part GN exponent holds only at p=2") {
  auto mass_form = [](const Params& pr, double s) { return (1.0 / s) / ((pr.sigma + 1.0) * pr.gamma - 1.0); };
  for (const Params& pr : {derive(3, 2.0, 0.75), derive(4, 2.0, 0.9)}) {
    const double s = gn_s_of_b(pr);
    CHECK(gn_exponents(pr, s).value_sigma == doctest::Approx(mass_form(pr, s)).epsilon(1e-12));
  }
  const Params p3 = derive(4, 3.0, 0.4);
  const double s3 = gn_s_of_b(p3);
  CHECK(std::abs(gn_exponents(p3, s3).value_sigma / mass_form(p3, s3) - 1.0) > 0.1);
}

TEST_CASE("compute_constants fills optional entries by regime") {
  const SharpConstants slow = compute_constants(derive(1, 2.0, 2.0));
  CHECK(slow.C_iso.has_value());
  CHECK_FALSE(slow.S_sobolev.has_value());
  CHECK(slow.C_gn.has_value());
  const SharpConstants mass_only = compute_constants(derive(3, 2.0, 0.5));
  CHECK_FALSE(mass_only.C_iso.has_value());
  CHECK_FALSE(mass_only.S_sobolev.has_value());
  const SharpConstants critical = compute_constants(derive(3, 2.0, 2.0 / 3.0));
  REQUIRE(critical.S_sobolev.has_value());
  CHECK(*critical.S_sobolev == doctest::Approx(sobolev_constant(3, 2.0)));
}
