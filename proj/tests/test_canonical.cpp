#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "gcelab/canonical.h"
#include "gcelab/errors.h"
#include "oracles.h"

using namespace gcelab;

namespace {

constexpr double kPi = std::numbers::pi;

cx random_point(std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> U(0, 1);
  return std::polar(radius * std::sqrt(U(rng)), 2 * kPi * U(rng));
}

// Distance between zero multisets under the best matching.
double zero_distance(const std::vector<cx>& a, const std::vector<cx>& b) {
  REQUIRE(a.size() == b.size());
  std::vector<std::vector<double>> cost(a.size(), std::vector<double>(b.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) cost[i][j] = std::abs(a[i] - b[j]);
  const auto col = min_cost_assignment(cost);
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, cost[i][col[i]]);
  return m;
}

double max_on_compact(const DiskGrid& g, double rho, const std::function<double(int, int)>& f) {
  double m = 0;
  for (int i = 0; i < g.n_r() && g.radii()[i] <= rho; ++i)
    for (int j = 0; j < g.n_theta(); ++j) m = std::max(m, f(i, j));
  return m;
}

}  // namespace

TEST_CASE("min_cost_assignment") {
  const std::vector<std::vector<double>> cost{{4, 1, 3}, {2, 0, 5}, {3, 2, 2}};
  const auto col = min_cost_assignment(cost);
  CHECK(cost[0][col[0]] + cost[1][col[1]] + cost[2][col[2]] == doctest::Approx(5));
  CHECK_THROWS_AS(min_cost_assignment({{1, 2}}), InvalidInput);
}

TEST_CASE("heins_solve examples") {
  auto r = heins_solve({0.0});
  CHECK(zero_distance(r.product.zeros, {0.0, 0.0}) <= 1e-12);
  r = heins_solve({0.0, 0.0});
  CHECK(zero_distance(r.product.zeros, {0.0, 0.0, 0.0}) <= 1e-12);
  CHECK(heins_solve({}).product.degree() == 1);

  for (const std::vector<cx>& C : std::vector<std::vector<cx>>{{0.0}, {0.4}, {cx(0, 0.3)}, {0.2, -0.3}}) {
    r = heins_solve(C);
    CHECK(r.product.degree() == static_cast<int>(C.size()) + 1);
    CHECK(r.assignment_residual <= 1e-6);
    CHECK(zero_distance(critical_points(r.product), C) <= 1e-6);
    if (C.size() == 1) {
      const cx a = oracles::brute_force_zero(C[0]);
      MESSAGE("target " << C[0] << " oracle zero " << a);
      CHECK(zero_distance(r.product.zeros, {0.0, a}) <= 1e-8);
    }
  }
  CHECK_THROWS_AS(heins_solve({1.0}), InvalidInput);
  CHECK_THROWS_AS(heins_solve({0.1}, 1e-6, {{0.2, 0.3}}), InvalidInput);
}

TEST_CASE("heins_solve is path independent") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 12; ++t) {
    const int k = 1 + t % 3;
    std::vector<cx> C, W;
    for (int i = 0; i < k; ++i) C.push_back(random_point(rng, 0.7));
    for (int i = 0; i < k; ++i) W.push_back(random_point(rng, 0.6));
    const auto a = heins_solve(C);
    const auto b = heins_solve(C, 1e-6, {W});
    CHECK(zero_distance(a.product.zeros, b.product.zeros) <= 1e-6);
    CHECK(zero_distance(critical_points(b.product), C) <= 1e-6);
  }
}

TEST_CASE("liouville_extract examples") {
  auto g = make_grid(64, 128, 2.0);
  auto ud = pullback(SelfMap::blaschke({{0.0}, 0.0}), std::nullopt, g);
  auto L = liouville_extract(ud.u_field, HoloFn::constant(1.0));
  CHECK(max_on_compact(*g, 0.7, [&](int i, int j) { return std::abs(L.at(i, j) - g->node(i, j)); }) <= 1e-3);
  CHECK(L.validation <= 1e-3);

  const auto H = HoloFn::polynomial({0.0, 2.0});
  auto sq = pullback(SelfMap::blaschke({{0.0, 0.0}, 0.0}), H, g);
  L = liouville_extract(sq.u_field, H);
  CHECK(max_on_compact(*g, 0.7, [&](int i, int j) { return std::abs(L.at(i, j) - std::pow(g->node(i, j), 2)); }) <=
        1e-3);
  MESSAGE("cr " << L.cr_residual << " ray " << L.ray_consistency);

  // Q-holomorphy negative control.
  std::vector<double> v = sq.u_field.values();
  for (int i = 0; i < g->n_r(); ++i)
    for (int j = 0; j < g->n_theta(); ++j) v[g->index(i, j)] += 0.01 * std::norm(g->node(i, j));
  const ScalarField bad(g, v);
  CHECK_THROWS_AS(liouville_extract(bad, H), InvalidInput);
  LiouvilleOptions lax;
  lax.cr_tol = INFINITY;
  const auto Lb = liouville_extract(bad, H, lax);
  MESSAGE("perturbed cr " << Lb.cr_residual);
  CHECK(Lb.cr_residual >= 100 * L.cr_residual);
}

TEST_CASE("liouville round trip on random Blaschke products") {
  auto g = make_grid(64, 128, 2.0);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0, 1);
  double worst = 0;
  for (int t = 0; t < 20; ++t) {
    std::vector<cx> z;
    for (int k = 0; k <= t % 3; ++k) z.push_back(random_point(rng, 0.8));
    const BlaschkeProduct B{z, 2 * kPi * U(rng)};
    const auto H = HoloFn::polynomial(B.derivative_numerator().c);
    const auto L = liouville_extract(pullback(SelfMap::blaschke(B), H, g).u_field, H);
    const auto N = normalize(B).first;
    const double err = max_on_compact(*g, 0.7, [&](int i, int j) { return std::abs(L.at(i, j) - N(g->node(i, j))); });
    worst = std::max(worst, err);
  }
  MESSAGE("worst sup error " << worst);
  CHECK(worst <= 1e-3);
}

TEST_CASE("embedding consistency under post-composition") {
  auto g = make_grid(64, 128, 2.0);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0, 1);
  for (int t = 0; t < 5; ++t) {
    const BlaschkeProduct B{{random_point(rng, 0.7), random_point(rng, 0.7)}, 2 * kPi * U(rng)};
    const MobiusDisk m(random_point(rng, 0.8), 2 * kPi * U(rng));
    const BlaschkeProduct mB = mobius_apply(m, B);
    const auto H1 = HoloFn::blaschke_derivative(B);
    const auto H2 = HoloFn::blaschke_derivative(mB);
    const auto L1 = liouville_extract(pullback(SelfMap::blaschke(B), H1, g).u_field, H1);
    const auto L2 = liouville_extract(pullback(SelfMap::blaschke(mB), H2, g).u_field, H2);
    CHECK(max_on_compact(*g, 0.7, [&](int i, int j) {
            return std::abs(L1.hyperbolic_density(i, j) - L2.hyperbolic_density(i, j));
          }) <= 1e-3);
  }
}

TEST_CASE("canonical_solution examples") {
  const std::pair<HoloFn, std::function<double(cx)>> cases[] = {
      {HoloFn::constant(1.0), [](cx z) { return std::log(2 / (1 - std::norm(z))); }},
      {HoloFn::polynomial({0.0, 2.0}), [](cx z) { return std::log(2 / (1 - std::pow(std::norm(z), 2))); }},
  };
  for (const auto& [H, exact] : cases) {
    const auto R = canonical_solution(H, 0.8, 8.0, 1e-12);
    const auto& g = *R.u_infinity.grid();
    const double err =
        max_on_compact(g, 0.8, [&](int i, int j) { return std::abs(R.u_infinity.at(i, j) - exact(g.node(i, j))); });
    MESSAGE("levels " << R.n_values.size() << " err " << err << " last change " << R.last_change);
    CHECK(R.complete);
    CHECK(R.monotone);
    CHECK(err <= 1e-2);
    REQUIRE(R.solutions.size() >= 3);
    for (std::size_t s = 1; s < 3; ++s)
      for (std::size_t k = 0; k < g.size(); ++k)
        CHECK_MESSAGE(R.solutions[s].u.values()[k] >= R.solutions[s - 1].u.values()[k], "node " << k);
    for (const auto& s : R.solutions)
      for (std::size_t k = 0; k < g.size(); ++k) REQUIRE(R.u_infinity.values()[k] >= s.u.values()[k] - 1e-12);
    REQUIRE(R.liouville);
    for (std::size_t i = 1; i < R.liouville->inner_profile.size(); ++i)
      CHECK(R.liouville->inner_profile[i].second >= R.liouville->inner_profile[i - 1].second);
    for (const auto& [r, d] : R.deficiency_profile) CHECK(std::isfinite(d));
  }
  CHECK_THROWS_AS(canonical_solution(HoloFn::constant(1.0), 0.99, 8.0, 1e-3), InvalidInput);
}

TEST_CASE("inner profile of canonical solutions is nondecreasing") {
  CanonicalOptions o;
  for (const auto& H : {HoloFn::polynomial({0.5, 1.0}), HoloFn::polynomial({0.1, -0.6, 1.0})}) {
    const auto R = canonical_solution(H, 0.8, 8.0, 1e-12, o);
    REQUIRE(R.liouville);
    const auto& p = R.liouville->inner_profile;
    for (std::size_t i = 1; i < p.size(); ++i) CHECK(p[i].second >= p[i - 1].second);
  }
}

TEST_CASE("maximal_solution examples and domination") {
  auto g = make_grid(64, 128, 3.0);
  auto mx = maximal_solution(HoloFn::constant(1.0), g);
  CHECK(mx.F.degree() == 1);
  CHECK(std::abs(mx.F(cx(0.3, 0.2)) - cx(0.3, 0.2)) <= 1e-12);
  CHECK(max_on_compact(*g, 0.95, [&](int i, int j) {
          return std::abs(mx.u.at(i, j) - std::log(2 / (1 - std::norm(g->node(i, j)))));
        }) <= 1e-12);

  const auto Hz = HoloFn::polynomial({0.0, 1.0});
  mx = maximal_solution(Hz, g);
  CHECK(zero_distance(mx.F.zeros, {0.0, 0.0}) <= 1e-12);
  CHECK(max_on_compact(*g, 0.95, [&](int i, int j) {
          return std::abs(mx.u.at(i, j) - std::log(4 / (1 - std::pow(std::norm(g->node(i, j)), 2))));
        }) <= 1e-10);
  CHECK(interior_residual(mx.u, Hz, 0.9) <= 1e-3);

  for (const auto& H : {HoloFn::constant(1.0), Hz, HoloFn::polynomial({0.0, -0.5, 1.0})}) {
    const auto u_max = maximal_solution(H, g).u;
    const auto u0 = solve_gce(GceProblem::constant(H, 0.0, g)).u;
    for (std::size_t k = 0; k < g->size(); ++k) REQUIRE(u_max.values()[k] >= u0.values()[k]);
    CHECK(interior_residual(u_max, H, 0.9) <= 1e-3);
  }
}

TEST_CASE("canonical_vs_maximal examples") {
  const BlaschkeProduct B{{0.3, cx(-0.2, 0.4), cx(0.1, -0.5)}, 0.0};
  REQUIRE(critical_points(B).size() == 2);
  CHECK(std::abs(critical_points(B)[0] - critical_points(B)[1]) > 0.1);
  for (const auto& H : {HoloFn::constant(1.0), HoloFn::polynomial({0.0, 2.0}), HoloFn::blaschke_derivative(B)}) {
    const auto r = canonical_vs_maximal(H);
    MESSAGE("gap " << r.gap << " density gap " << r.density_gap);
    CHECK(r.coincide);
    CHECK(r.gap <= 1e-2);
    CHECK(r.density_gap <= 1e-2);
  }
}

TEST_CASE("deficiency examples") {
  auto g = make_grid(64, 128, 3.0);
  const std::vector<double> radii{0.1, 0.5, 0.8, 0.9, 0.95};
  const ScalarField ud(g, tabulate(*g, [](cx z) { return std::log(2 / (1 - std::norm(z))); }));
  for (double d : deficiency(ud, radii)) CHECK(std::abs(d) <= 1e-4);

  const auto R = canonical_solution(HoloFn::constant(1.0), 0.95, 8.0, 1e-12);
  const auto dc = deficiency(R.u_infinity, radii);
  for (double d : dc) CHECK(std::abs(d) <= 2 * kPi * 1e-2);

  const auto u0 = solve_gce(GceProblem::constant(HoloFn::constant(1.0), 0.0, g)).u;
  const auto d0 = deficiency(u0, radii);
  for (std::size_t k = 0; k < radii.size(); ++k) {
    CHECK(d0[k] >= 2 * kPi * std::log(2 / (1 - radii[k] * radii[k])) - 1e-6);
    if (k) CHECK(d0[k] > d0[k - 1]);
  }
  CHECK_THROWS_AS(deficiency(ud, {1.0}), InvalidInput);
}

TEST_CASE("boundary growth") {
  const auto one = boundary_growth_probe(HoloFn::constant(1.0), {3.0}, {0, 2 * kPi});
  CHECK(one.levels[0].liminf_ok);
  CHECK(one.levels[0].boundary_min >= 3 - 0.1);
  CHECK(one.levels[0].interior_excess < 0);

  // At a fixed interior radius the level-3 solution is the radius-R metric,
  // log(2R / (R^2 - r^2)) with log(2R / (R^2 - 1)) = 3, about 2.83 at r = 0.99.
  auto g = make_grid(64, 128, 3.0);
  const double h = 3.0;
  const double Rs = (1.0 + std::sqrt(1.0 + std::exp(2 * h))) / std::exp(h);
  CHECK(std::log(2 * Rs / (Rs * Rs - 1)) == doctest::Approx(h).epsilon(1e-12));
  const auto u3 = solve_gce(GceProblem::constant(HoloFn::constant(1.0), h, g)).u;
  for (int j = 0; j < g->n_theta(); j += 16) {
    const double v = u3.sample_ray(j, 0.99);
    CHECK(v == doctest::Approx(std::log(2 * Rs / (Rs * Rs - 0.99 * 0.99))).epsilon(1e-3));
    CHECK(v < h - 0.1);
  }

  const auto rep = boundary_growth_probe(HoloFn::polynomial({-2.0, 1.0}), {0, 1, 2, 3, 4, 5, 6}, {0, 2 * kPi});
  CHECK(rep.probe_increasing);
  CHECK(rep.all_liminf_ok);
  for (const auto& l : rep.levels) {
    MESSAGE("n " << l.n << " probe " << l.probe_value << " boundary " << l.boundary_min);
    CHECK(l.interior_excess < 0);
  }
  const auto arc = boundary_growth_probe(HoloFn::polynomial({-2.0, 1.0}), {1, 2}, {-0.5, 0.5});
  CHECK(arc.probe_increasing);
  CHECK_THROWS_AS(boundary_growth_probe(HoloFn::constant(1.0), {}, {0, 1}), InvalidInput);
}

TEST_CASE("generator_family") {
  auto g = make_grid(64, 128, 2.0);
  const auto H = generator_family({{0.0}, 0.0}, 0.5, *g);
  for (cx z : {cx(0), cx(0.3, 0.4), cx(-0.7, 0.1)}) CHECK(std::abs(H(z) - 4.0 / 3.0) <= 1e-10);

  // I0 = z^2: the boundary trace of log(2|r I0'| / (1 - |r I0|^2)) - log|H_r| vanishes.
  const BlaschkeProduct sq{{0.0, 0.0}, 0.0};
  const auto Hs = generator_family(sq, 0.5, *g);
  double trace = 0;
  for (int j = 0; j < g->n_theta(); ++j) {
    const cx z = g->boundary_node(j);
    trace = std::max(trace, std::abs(std::log(2 * 0.5 * std::abs(sq.derivative(z)) / (1 - 0.25 * std::norm(sq(z)))) -
                                     std::log(std::abs(Hs(z)))));
  }
  CHECK(trace <= 1e-2);

  // |I0| = 1 on the circle, so phi_r is the constant 1 - r^2 and H_r = 2r/(1 - r^2) I0'.
  const BlaschkeProduct I0{{0.0, cx(0.3, -0.2)}, 0.4};
  double prev = 0;
  for (double r : {0.3, 0.5, 0.7, 0.9}) {
    const auto Hr = generator_family(I0, r, *g);
    for (cx z : {cx(0.2, 0.1), cx(-0.5, 0.4)}) {
      const cx ratio = Hr(z) / I0.derivative(z);
      CHECK(std::abs(ratio - 2 * r / (1 - r * r)) <= 1e-8);
    }
    const double mag = std::abs(Hr(cx(0.2, 0.1)));
    CHECK(mag > prev);
    prev = mag;
  }
  CHECK_THROWS_AS(generator_family(I0, 1.0, *g), InvalidInput);
}
