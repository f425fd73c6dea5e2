#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <random>

#include "gcelab/errors.h"
#include "gcelab/gce.h"

using namespace gcelab;

namespace {

// Hyperbolic metric of the radius-R disk: log(2R / (R^2 - |z|^2)).
double disk_metric(double R, cx z) { return std::log(2 * R / (R * R - std::norm(z))); }

ScalarField closed_form(double R, const GridPtr& g) {
  return ScalarField(g, tabulate(*g, [&](cx z) { return disk_metric(R, z); }),
                     tabulate_boundary(*g, [&](cx z) { return disk_metric(R, z); }));
}

double max_diff(const ScalarField& a, const ScalarField& b) {
  double m = 0;
  for (std::size_t k = 0; k < a.values().size(); ++k) m = std::max(m, std::abs(a.values()[k] - b.values()[k]));
  return m;
}

HoloFn random_poly(std::mt19937_64& rng, int max_degree) {
  std::uniform_real_distribution<double> U(-1, 1);
  std::uniform_int_distribution<int> D(0, max_degree);
  std::vector<cx> c(D(rng) + 1);
  for (auto& x : c) x = cx(U(rng), U(rng));
  if (std::abs(c[0]) < 0.1) c[0] += 0.5;  // keep H away from identically small
  return HoloFn::polynomial(c);
}

}  // namespace

TEST_CASE("solve_gce closed form") {
  auto g = make_grid(64, 128, 2.0);
  for (double R : {1.5, 2.0, 3.0}) {
    auto pb = GceProblem::constant(HoloFn::constant(1.0), std::log(2 * R / (R * R - 1)), g);
    const auto t0 = std::chrono::steady_clock::now();
    auto sol = solve_gce(pb);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const double err = max_diff(sol.u, closed_form(R, g));
    MESSAGE("R=" << R << " err " << err << " iters " << sol.iterations << " res " << sol.pde_residual << " floor "
                 << sol.residual_floor << " weak " << sol.weak_residual << " t " << secs);
    CHECK(sol.converged);
    CHECK(err <= 1e-3);
    CHECK(secs <= 10);
    if (R == 2.0) CHECK(std::abs(sol.u.origin_value()) <= 1e-3);
  }
}

TEST_CASE("solve_gce with a vanishing weight") {
  auto g = make_grid(64, 128, 2.0);
  auto pb = GceProblem::constant(HoloFn::polynomial({0.0, 1.0}), 0.0, g);
  auto sol = solve_gce(pb);
  CHECK(sol.converged);
  CHECK(sol.pde_residual <= 1e-8);
  CHECK(sol.clamp_events == 0);
  for (double v : sol.u.values()) CHECK(v <= 0.0);
}

TEST_CASE("residual modes") {
  auto g = make_grid(64, 128, 2.0);
  auto pb = GceProblem::constant(HoloFn::constant(1.0), std::log(4.0 / 3.0), g);
  auto exact = closed_form(2.0, g);
  const double st = residual(exact, pb, ResidualMode::stencil);
  const double wk = residual(exact, pb, ResidualMode::weak);
  MESSAGE("closed form residuals: stencil " << st << " weak " << wk);
  CHECK(st <= 1e-3);
  CHECK(wk <= 1e-4);

  // A harmonic field is not a solution: weak residual is max_phi |∫ |H|^2 φ|.
  auto pz = GceProblem::constant(HoloFn::polynomial({0.5, 1.0}), 0.0, g);
  auto ph = pz.harmonic_majorant();
  const auto rho = pz.density();
  double expect = 0;
  for (const auto& b : weak_test_family()) {
    std::vector<double> f(g->size());
    for (int i = 0; i < g->n_r(); ++i)
      for (int j = 0; j < g->n_theta(); ++j) f[g->index(i, j)] = rho[g->index(i, j)] * b.value(g->node(i, j));
    expect = std::max(expect, std::abs(integrate(*g, f)));
  }
  CHECK(expect > 0);
  CHECK(std::abs(residual(ph, pz, ResidualMode::weak) - expect) <= 1e-3 * expect);
  CHECK(residual(ph, pz, ResidualMode::stencil) > 0.1);

  auto sol = solve_gce(pz);
  std::vector<double> shifted = sol.u.values();
  for (double& v : shifted) v += 0.1;
  CHECK(residual(ScalarField(g, shifted, sol.u.boundary()), pz, ResidualMode::weak) > sol.weak_residual);
}

TEST_CASE("bump laplacian matches finite differences") {
  for (const auto& b : weak_test_family()) {
    const cx z = std::polar(b.center + 0.3 * b.delta, 0.8);
    const double h = 1e-4;
    const double fd = (b.value(z + h) + b.value(z - h) + b.value(z + cx(0, h)) + b.value(z - cx(0, h)) -
                       4 * b.value(z)) /
                      (h * h);
    CHECK(std::abs(fd - b.laplacian(z)) <= 1e-4 * (1 + std::abs(fd)));
  }
  CHECK(weak_test_family().size() == 20);
}

TEST_CASE("uniqueness: initialization independence") {
  auto g = make_grid(32, 64, 2.0);
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> Uh(-2, 2);
  double worst = 0;
  for (int t = 0; t < 20; ++t) {
    auto pb = GceProblem::constant(random_poly(rng, 3), Uh(rng), g);
    auto a = solve_gce(pb);
    auto ph = pb.harmonic_majorant();
    std::vector<double> low = ph.values();
    for (double& v : low) v -= 5;
    auto b = solve_gce(pb, 1e-10, 100, ScalarField(g, low));
    CHECK(a.converged);
    CHECK(b.converged);
    worst = std::max(worst, max_diff(a.u, b.u));
    for (std::size_t k = 0; k < ph.values().size(); ++k) CHECK(a.u.values()[k] <= ph.values()[k] + 1e-12);
  }
  MESSAGE("worst init disagreement " << worst);
  CHECK(worst <= 1e-8);
}

TEST_CASE("monotonicity in h and comparison reports") {
  auto g = make_grid(32, 64, 2.0);
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> Uh(-1, 1), Ua(0, 6.28);
  int violations = 0;
  for (int t = 0; t < 20; ++t) {
    auto H = random_poly(rng, 3);
    const double c = Uh(rng), a1 = Ua(rng);
    auto h1 = tabulate_boundary(*g, [&](cx z) { return c + 0.5 * std::cos(std::arg(z) + a1); });
    auto h2 = h1;
    for (double& v : h2) v += 0.5 + 0.5 * std::sin(3 * v);  // h2 >= h1
    GceProblem p1(H, h1, g), p2(H, h2, g);
    auto u1 = solve_gce(p1), u2 = solve_gce(p2);
    auto rep = check_comparison(u1.u, u2.u, p1);
    violations += static_cast<int>(rep.violations.size());
  }
  CHECK(violations == 0);

  auto g2 = make_grid(64, 128, 2.0);
  auto pb = GceProblem::constant(HoloFn::constant(1.0), 0.0, g2);
  auto s0 = solve_gce(pb);
  auto s1 = solve_gce(GceProblem::constant(HoloFn::constant(1.0), 1.0, g2));
  auto rep = check_comparison(s0.u, s1.u, pb);
  CHECK(rep.violations.empty());
  auto same = check_comparison(s0.u, s0.u, pb);
  CHECK(same.violations.empty());
  CHECK(same.max_difference == 0.0);
  auto r2 = closed_form(2.0, g2), r15 = closed_form(1.5, g2);
  auto cf = check_comparison(r2, r15, pb);
  CHECK(cf.violations.empty());
  CHECK(cf.max_difference < 0);
  CHECK_THROWS_AS(check_comparison(r15, r2, pb), InvalidInput);  // boundary order reversed
  std::vector<double> bumped = s0.u.values();
  for (double& v : bumped) v += 0.3;  // raises e^{2u}: no longer a subsolution
  CHECK_THROWS_AS(check_comparison(ScalarField(g2, bumped, std::vector<double>(128, 0.0)), s1.u, pb), InvalidInput);
}

TEST_CASE("scaling symmetry") {
  auto g = make_grid(32, 64, 2.0);
  auto H = HoloFn::polynomial({cx(0.3, 0.1), cx(0.5, -0.2), 0.4});
  const double c = 2.5;
  auto pa = GceProblem::constant(H, 0.7, g);
  auto pb = GceProblem::constant(HoloFn::product({H}, c), 0.7 - std::log(c), g);
  auto ua = solve_gce(pa), ub = solve_gce(pb);
  double e = 0;
  for (std::size_t k = 0; k < g->size(); ++k) e = std::max(e, std::abs(ub.u.values()[k] + std::log(c) - ua.u.values()[k]));
  CHECK(e <= 1e-8);
}

TEST_CASE("picard_step") {
  auto g = make_grid(64, 128, 2.0);
  GreenOperator op(g);
  auto pb = GceProblem::constant(HoloFn::constant(1.0), std::log(4.0 / 3.0), g);
  auto ph = pb.harmonic_majorant();
  std::vector<double> low(g->size(), -60.0);
  auto t_low = picard_step(ScalarField(g, low), pb, op);
  CHECK(max_diff(t_low, ph) <= 1e-12);

  auto exact = closed_form(2.0, g);
  CHECK(max_diff(picard_step(exact, pb, op), exact) <= 1e-3);

  std::vector<double> v1 = exact.values(), v2 = exact.values();
  for (std::size_t k = 0; k < v1.size(); ++k) v1[k] -= 0.2 + 0.1 * std::sin(3.0 * k);
  auto t1 = picard_step(ScalarField(g, v1), pb, op), t2 = picard_step(ScalarField(g, v2), pb, op);
  for (std::size_t k = 0; k < v1.size(); ++k) {
    CHECK(t1.values()[k] >= t2.values()[k]);
    CHECK(t1.values()[k] <= ph.values()[k]);
  }
  std::vector<double> high = ph.values();
  for (double& v : high) v += 0.1;
  CHECK_THROWS_AS(picard_step(ScalarField(g, high), pb, op), InvalidInput);
}

TEST_CASE("Picard iterates bracket the Newton solution") {
  auto g = make_grid(64, 128, 2.0);
  GreenOperator op(g);
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> Uh(-1, 1);
  double worst = 0;
  for (int t = 0; t < 3; ++t) {
    auto pb = GceProblem::constant(random_poly(rng, 2), Uh(rng), g);
    auto newton = solve_gce(pb);
    REQUIRE(newton.converged);
    ScalarField v = pb.harmonic_majorant();
    ScalarField prev = v;
    for (int k = 1; k <= 50; ++k) {
      prev = v;
      v = picard_step(v, pb, op);
    }
    // k = 50 is even (above), k = 49 odd (below).
    for (std::size_t k = 0; k < g->size(); ++k) {
      const double u = newton.u.values()[k];
      worst = std::max({worst, prev.values()[k] - u, u - v.values()[k]});
    }
  }
  MESSAGE("worst sandwich excess " << worst);
  CHECK(worst <= 1e-3);
}

TEST_CASE("problem validation") {
  auto g = make_grid(16, 32, 2.0);
  CHECK_THROWS_AS(GceProblem::constant(HoloFn::constant(0.0), 0.0, g), InvalidInput);
  CHECK_THROWS_AS(GceProblem(HoloFn::constant(1.0), std::vector<double>(5, 0.0), g), InvalidInput);
  CHECK_THROWS_AS(GceProblem::constant(HoloFn::constant(1.0), NAN, g), InvalidInput);
  auto pb = GceProblem::constant(HoloFn::constant(1.0), 0.0, g);
  CHECK_THROWS_AS(solve_gce(pb, -1.0), InvalidInput);
  auto partial = solve_gce(pb, 1e-10, 0);
  CHECK(!partial.converged);
}
