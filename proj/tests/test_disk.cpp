#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "gcelab/errors.h"
#include "gcelab/grid.h"
#include "gcelab/potential.h"
#include "gcelab/stencil.h"

using namespace gcelab;
constexpr double kPi = std::numbers::pi;

namespace {
double sum_weights(const DiskGrid& g) {
  double s = 0;
  for (double w : g.quad_weights()) s += w;
  return s;
}
}  // namespace

TEST_CASE("make_grid total area") {
  CHECK(std::abs(sum_weights(*make_grid(8, 16, 1.0)) - kPi) <= 1e-2);
  CHECK(std::abs(sum_weights(*make_grid(64, 128, 2.0)) - kPi) <= 1e-6);
  MESSAGE("8x16 err " << sum_weights(*make_grid(8, 16, 1.0)) - kPi << " 64x128 err "
                      << sum_weights(*make_grid(64, 128, 2.0)) - kPi);
}

TEST_CASE("radial moments") {
  auto g = make_grid(64, 128, 2.0);
  for (int k = 0; k <= 8; ++k) {
    auto v = tabulate(*g, [&](cx z) { return std::pow(std::abs(z), k); });
    const double exact = 2 * kPi / (k + 2);
    MESSAGE("k=" << k << " rel " << (integrate(*g, v) - exact) / exact);
    CHECK(std::abs(integrate(*g, v) - exact) <= 1e-4 * exact);
  }
  auto v = tabulate(*g, [&](cx z) { return 1.0 - std::abs(z); });
  CHECK(std::abs(integrate(*g, v) - kPi / 3) <= 1e-4);
}

TEST_CASE("poisson_extend examples") {
  auto g = make_grid(64, 128, 2.0);
  auto h3 = tabulate_boundary(*g, [](cx) { return 3.0; });
  auto p3 = poisson_extend(h3, g);
  for (double v : p3.values()) CHECK(std::abs(v - 3.0) <= 1e-12);

  auto h1 = tabulate_boundary(*g, [](cx z) { return z.real(); });
  auto p1 = poisson_extend(h1, g);
  auto h2 = tabulate_boundary(*g, [](cx z) { return (z * z).real(); });
  auto p2 = poisson_extend(h2, g);
  double e1 = 0, e2 = 0;
  for (int i = 0; i < g->n_r(); ++i)
    for (int j = 0; j < g->n_theta(); ++j) {
      const cx z = g->node(i, j);
      e1 = std::max(e1, std::abs(p1.at(i, j) - z.real()));
      e2 = std::max(e2, std::abs(p2.at(i, j) - (z * z).real()));
    }
  CHECK(e1 <= 1e-4);
  CHECK(e2 <= 1e-4);
  CHECK(p2.boundary().has_value());

  std::vector<double> bad(g->n_theta(), 0.0);
  bad[3] = std::nan("");
  CHECK_THROWS_AS(poisson_extend(bad, g), InvalidInput);
}

TEST_CASE("discrete harmonicity of poisson_extend") {
  // Measured consistency constant: the max discrete Laplacian of a smooth
  // harmonic field times (1/n_r)^2 stays bounded under refinement.
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(-1, 1);
  std::vector<double> a(6);
  for (auto& x : a) x = U(rng);
  auto h_of = [&](cx z) {
    double v = a[0];
    cx p = z;
    for (int k = 1; k < 6; ++k, p *= z) v += a[k] * p.real();
    return v;
  };
  double prev = 0;
  for (int n : {32, 64}) {
    auto g = make_grid(n, 2 * n, 2.0);
    auto p = poisson_extend(tabulate_boundary(*g, h_of), g);
    auto lap = laplacian(p);
    double m = 0;
    for (double v : lap) m = std::max(m, std::abs(v));
    MESSAGE("n_r=" << n << " max |lap P_h| = " << m);
    if (prev > 0) CHECK(m <= 0.5 * prev);
    CHECK(m * (1.0 / n) * (1.0 / n) <= 0.05);
    prev = m;
  }
}

TEST_CASE("green_potential examples") {
  auto g = make_grid(64, 128, 2.0);
  GreenOperator op(g);
  auto leb = green_potential(BlaschkeMeasureSpec::lebesgue(), op);
  double e = 0;
  for (int i = 0; i < g->n_r(); ++i)
    for (int j = 0; j < g->n_theta(); ++j)
      e = std::max(e, std::abs(leb.at(i, j) - (1 - std::norm(g->node(i, j))) / 4));
  MESSAGE("lebesgue err " << e);
  CHECK(e <= 1e-3);

  auto d0 = green_potential(BlaschkeMeasureSpec::point(0.0, 1.0), g);
  double ed = 0;
  for (int i = 0; i < g->n_r(); ++i)
    for (int j = 0; j < g->n_theta(); ++j)
      ed = std::max(ed, std::abs(d0.at(i, j) - std::log(1 / g->radii()[i]) / (2 * kPi)));
  CHECK(ed <= 1e-14);

  auto hz = BlaschkeMeasureSpec::weighted(HoloFn::polynomial({0.0, 1.0}));
  const double at0 = green_potential_at(hz, *g, 0.0);
  MESSAGE("|z|^2 potential at 0: " << at0);
  CHECK(std::abs(at0 - 1.0 / 16) <= 1e-3);
  auto field = green_potential(hz, op);
  CHECK(std::abs(field.origin_value() - 1.0 / 16) <= 1e-3);

  CHECK_THROWS_AS(green_potential(BlaschkeMeasureSpec::point(cx(1.2, 0), 1.0), g), InvalidInput);
  CHECK_THROWS_AS(green_potential(BlaschkeMeasureSpec::point(cx(0.3, 0), -1.0), g), InvalidInput);
}

TEST_CASE("green_potential linearity, sign and weak Laplacian") {
  auto g = make_grid(48, 96, 2.0);
  GreenOperator op(g);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-0.9, 0.9), P(0, 2);
  for (int trial = 0; trial < 5; ++trial) {
    auto h1 = HoloFn::polynomial({cx(U(rng), U(rng)), cx(U(rng), U(rng)), cx(U(rng), U(rng))});
    auto h2 = HoloFn::polynomial({cx(U(rng), U(rng)), cx(U(rng), U(rng))});
    auto m1 = BlaschkeMeasureSpec::weighted(h1);
    m1.point_masses.push_back({cx(U(rng) * 0.7, U(rng) * 0.7), 1.0});
    auto m2 = BlaschkeMeasureSpec::weighted(h2);
    const double a = P(rng), b = P(rng);
    auto g1 = green_potential(m1, op), g2 = green_potential(m2, op);
    // a mu1 + b mu2 as one measure: density a|h1|^2 + b|h2|^2 via a weight field.
    auto d1 = m1.nodal_density(*g), d2 = m2.nodal_density(*g);
    std::vector<double> comb(g->size());
    for (std::size_t k = 0; k < comb.size(); ++k) comb[k] = a * d1[k] + b * d2[k];
    BlaschkeMeasureSpec mc;
    mc.weight = ScalarField(g, comb);
    mc.point_masses.push_back({m1.point_masses[0].location, a});
    auto gc = green_potential(mc, op);
    double err = 0, mn = 1e300;
    for (std::size_t k = 0; k < comb.size(); ++k) {
      const double expect = a * g1.values()[k] + b * g2.values()[k];
      err = std::max(err, std::abs(gc.values()[k] - expect) / (1 + std::abs(expect)));
      mn = std::min({mn, g1.values()[k], g2.values()[k]});
    }
    CHECK(err <= 1e-12);
    CHECK(mn >= 0.0);
  }
  // Weak form: int (-G_mu) Δphi = int phi dmu for a smooth bump, mu = Lebesgue.
  auto lg = green_potential(BlaschkeMeasureSpec::lebesgue(), op);
  auto phi = [](cx z) {
    const double t = std::norm(z - cx(0.2, 0.1)) / 0.25;
    return t < 1 ? std::exp(1 - 1 / (1 - t)) : 0.0;
  };
  // Δ(G) tested against phi through the discrete stencil (self-adjoint).
  auto lap = laplacian(lg);
  auto ph = tabulate(*g, phi);
  std::vector<double> lhs(g->size()), rhs(g->size());
  for (std::size_t k = 0; k < lhs.size(); ++k) {
    lhs[k] = -lap[k] * ph[k];
    rhs[k] = ph[k];
  }
  const double L = integrate(*g, lhs), R = integrate(*g, rhs);
  MESSAGE("weak: " << L << " vs " << R);
  CHECK(std::abs(L - R) <= 1e-3 * R);
}

TEST_CASE("outer_function examples") {
  auto g = make_grid(32, 128, 2.0);
  auto c = outer_function(tabulate_boundary(*g, [](cx) { return 0.75; }), *g);
  CHECK(std::abs(c(cx(0.3, 0.2)) - 0.75) <= 1e-12);
  auto w = tabulate_boundary(*g, [](cx z) { return std::abs(2.0 - z); });
  auto o = outer_function(w, *g);
  const cx eta = o(0.0) / 2.0;
  CHECK(std::abs(std::abs(eta) - 1) <= 1e-10);
  double e = 0;
  for (int k = 0; k < 200; ++k) {
    const cx z = std::polar(0.99 * k / 200.0, 0.37 * k);
    e = std::max(e, std::abs(o(z) - eta * (2.0 - z)));
  }
  MESSAGE("outer err " << e);
  CHECK(e <= 1e-4);

  std::vector<double> bad(g->n_theta(), 1.0);
  bad[0] = 0.0;
  CHECK_THROWS_AS(outer_function(bad, *g), InvalidInput);
}

TEST_CASE("outer multiplicativity") {
  auto g = make_grid(32, 128, 2.0);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-0.4, 0.4);
  for (int trial = 0; trial < 10; ++trial) {
    const double a1 = U(rng), b1 = U(rng), a2 = U(rng), b2 = U(rng);
    auto w1 = tabulate_boundary(*g, [&](cx z) { return std::exp(a1 * z.real() + b1 * (z * z).imag()); });
    auto w2 = tabulate_boundary(*g, [&](cx z) { return 1.5 + a2 * z.imag() + b2 * (z * z * z).real(); });
    std::vector<double> w12(w1.size());
    for (std::size_t k = 0; k < w1.size(); ++k) w12[k] = w1[k] * w2[k];
    auto o1 = outer_function(w1, *g), o2 = outer_function(w2, *g), o12 = outer_function(w12, *g);
    const cx eta = o12(0.0) / (o1(0.0) * o2(0.0));
    double e = 0;
    for (int k = 0; k < 100; ++k) {
      const cx z = std::polar(0.95 * k / 100.0, 1.1 * k);
      e = std::max(e, std::abs(o12(z) - eta * o1(z) * o2(z)));
    }
    CHECK(e <= 1e-4);
    CHECK(std::abs(std::abs(eta) - 1) <= 1e-10);
  }
}

TEST_CASE("bergman_norm examples") {
  auto g = make_grid(64, 128, 2.0);
  CHECK(std::abs(bergman_norm(HoloFn::constant(1.0), 2, 1, *g) - std::sqrt(kPi / 3)) <= 1e-4);
  CHECK(bergman_norm(HoloFn::constant(0.0), 2, 1, *g) == 0.0);
  CHECK(std::abs(bergman_norm(HoloFn::polynomial({0.0, 1.0}), 2, 1, *g) - std::sqrt(kPi / 10)) <= 1e-4);
  CHECK_THROWS_AS(bergman_norm(HoloFn::constant(1.0), 0, 1, *g), InvalidInput);
  CHECK_THROWS_AS(bergman_norm(HoloFn::constant(1.0), 2, -1, *g), InvalidInput);
}

TEST_CASE("littlewood_paley examples") {
  auto g = make_grid(128, 256, 2.0);
  auto lp1 = littlewood_paley(HoloFn::polynomial({0.0, 1.0}), *g);
  CHECK(std::abs(lp1.lhs - 1) <= 1e-12);
  CHECK(std::abs(lp1.rhs - 1) <= 1e-3);
  auto lp5 = littlewood_paley(HoloFn::constant(5.0), *g);
  CHECK(lp5.lhs == doctest::Approx(25).epsilon(1e-14));
  CHECK(lp5.rhs == 25.0);
  auto lp3 = littlewood_paley(HoloFn::polynomial({3.0, 0.0, 1.0}), *g);
  CHECK(std::abs(lp3.lhs - 10) <= 1e-10);
  CHECK(std::abs(lp3.rhs - 10) <= 1e-3);
}

TEST_CASE("littlewood_paley on random polynomials") {
  auto g = make_grid(128, 256, 2.0);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> U(-1, 1);
  std::uniform_int_distribution<int> D(0, 8);
  double worst = 0;
  for (int t = 0; t < 50; ++t) {
    std::vector<cx> c(D(rng) + 1);
    for (auto& x : c) x = cx(U(rng), U(rng));
    auto lp = littlewood_paley(HoloFn::polynomial(c), *g);
    worst = std::max(worst, std::abs(lp.lhs - lp.rhs) / lp.lhs);
  }
  MESSAGE("worst LP rel " << worst);
  CHECK(worst <= 1e-3);
}
