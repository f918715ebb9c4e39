#include <doctest.h>

#include <cmath>
#include <memory>

#include "dnde/error.hpp"
#include "dnde/solver.hpp"

using namespace dnde;

namespace {

std::shared_ptr<const RadialGrid> grid(int n, double R, std::size_t m) {
  return std::make_shared<const RadialGrid>(build_grid(n, R, m));
}

}  // namespace

TEST_CASE("initial conditions have unit mass") {
  const Params pr = derive(3, 2.0, 2.0);
  for (InitKind k : {InitKind::Barenblatt, InitKind::PerturbedBarenblatt, InitKind::GaussianBump, InitKind::DoubleBump}) {
    InitOptions io;
    io.t0 = time_scale(pr);
    const State s = initial_condition(k, pr, grid(3, 6.0, 400), io);
    CHECK(mass(s) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(s.u_floor > 0.0);
    CHECK(parse_init_kind(to_string(k)) == k);
  }
  CHECK_THROWS_AS(parse_init_kind("ring"), Error);
}

TEST_CASE("a step conserves mass and keeps the density nonnegative") {
  const Params pr = derive(1, 2.0, 2.0);
  InitOptions io;
  io.t0 = time_scale(pr);
  State s = initial_condition(InitKind::DoubleBump, pr, grid(1, 8.0, 300), io);
  const double m0 = mass(s);
  for (int k = 0; k < 200; ++k) advance(s, cfl_dt(s, 0.25));
  CHECK(mass(s) == doctest::Approx(m0).epsilon(1e-13));
  for (double x : s.u) CHECK(x >= 0.0);
  CHECK(s.steps == 200);
}

TEST_CASE("evolve saves uniform records and ends at t_end") {
  const Params pr = derive(3, 3.0, 1.0);
  const BarenblattSpec spec = make_barenblatt(pr);
  const double tau = time_scale(pr);
  InitOptions io;
  io.t0 = tau;
  const State s = initial_condition(InitKind::Barenblatt, pr, grid(3, auto_radius(spec, 2 * tau), 200), io);
  EvolveOptions eo;
  eo.t_end = 2 * tau;
  eo.save_every = 5;
  eo.reference = spec;
  const std::vector<Snapshot> snaps = evolve(s, eo);
  REQUIRE(snaps.size() == 6);
  CHECK(snaps.back().state.t == 2 * tau);
  for (std::size_t k = 0; k < snaps.size(); ++k) {
    CHECK(snaps[k].record.t == doctest::Approx(tau * (1.0 + 0.2 * k)).epsilon(1e-14));
    CHECK(snaps[k].record.err_exact_l1.has_value());
  }
  CHECK(*snaps.back().record.err_exact_l1 < 2e-3);
}

TEST_CASE("runs are deterministic") {
  const Params pr = derive(3, 2.0, 0.75);
  InitOptions io;
  io.t0 = time_scale(pr);
  const State s = initial_condition(InitKind::PerturbedBarenblatt, pr, grid(3, 20.0, 200), io);
  EvolveOptions eo;
  eo.t_end = 1.5 * io.t0;
  eo.save_every = 3;
  const std::vector<Snapshot> a = evolve(s, eo);
  const std::vector<Snapshot> b = evolve(s, eo);
  REQUIRE(a.size() == b.size());
  CHECK(a.back().state.u == b.back().state.u);
  CHECK(a.back().record.W_b == b.back().record.W_b);
}

TEST_CASE("L1 error is small on the sampled exact solution") {
  const Params pr = derive(1, 2.0, 2.0);
  const BarenblattSpec spec = make_barenblatt(pr);
  InitOptions io;
  io.t0 = time_scale(pr);
  const State s = initial_condition(InitKind::Barenblatt, pr, grid(1, 3.0, 500), io);
  CHECK(l1_error(s, spec) < 1e-12);
}

TEST_CASE("solver errors") {
  const Params pr = derive(1, 2.0, 2.0);
  const auto g = grid(1, 4.0, 50);
  InitOptions io;
  io.t0 = 0.0;
  CHECK_THROWS_AS(initial_condition(InitKind::Barenblatt, pr, g, io), Error);
  io.t0 = 1.0;
  io.amplitude = 1.5;
  CHECK_THROWS_AS(initial_condition(InitKind::PerturbedBarenblatt, pr, g, io), Error);
  CHECK_THROWS_AS(state_from_density(pr, g, std::vector<double>(49, 1.0), 0.0), Error);
  std::vector<double> bad(50, 1.0);
  bad[3] = -1.0;
  CHECK_THROWS_AS(state_from_density(pr, g, bad, 0.0), Error);
  const State s = state_from_density(pr, g, std::vector<double>(50, 1.0), 1.0);
  EvolveOptions eo;
  eo.t_end = 0.5;
  CHECK_THROWS_AS(evolve(s, eo), Error);
  eo.t_end = 100.0;
  eo.max_steps = 10;
  try {
    evolve(s, eo);
    FAIL("expected StepBudgetExceeded");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::StepBudgetExceeded);
  }
}

TEST_CASE("pressure residual is small along an exact run") {
  const Params pr = derive(1, 2.0, 2.0);
  const BarenblattSpec spec = make_barenblatt(pr);
  const double tau = time_scale(pr);
  InitOptions io;
  io.t0 = tau;
  const State s = initial_condition(InitKind::Barenblatt, pr, grid(1, auto_radius(spec, 2 * tau), 800), io);
  EvolveOptions eo;
  eo.t_end = 2 * tau;
  eo.save_every = 20;
  const std::vector<Snapshot> snaps = evolve(s, eo);
  CHECK(pressure_residual(snaps[snaps.size() - 2].state, snaps.back().state) < 0.05);
  CHECK_THROWS_AS(pressure_residual(snaps.back().state, snaps.front().state), Error);
}
