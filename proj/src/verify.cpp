#include "gcelab/verify.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "gcelab/canonical.h"
#include "gcelab/errors.h"

namespace gcelab {

namespace {

constexpr double kPi = std::numbers::pi;
using Rng = std::mt19937_64;

struct Outcome {
  double measure;
  double threshold;
  bool at_least = false;
};

struct Property {
  const char* suite;
  const char* name;
  std::function<Outcome(Rng&)> run;
};

double uniform(Rng& rng, double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }

cx disk_point(Rng& rng, double radius) { return std::polar(radius * std::sqrt(uniform(rng, 0, 1)), uniform(rng, 0, 2 * kPi)); }

HoloFn random_poly(Rng& rng, int max_degree) {
  std::vector<cx> c(std::uniform_int_distribution<int>(0, max_degree)(rng) + 1);
  for (auto& x : c) x = cx(uniform(rng, -1, 1), uniform(rng, -1, 1));
  if (std::abs(c[0]) < 0.1) c[0] += 0.5;
  return HoloFn::polynomial(c);
}

BlaschkeProduct random_blaschke(Rng& rng, int degree, double radius) {
  std::vector<cx> z;
  for (int k = 0; k < degree; ++k) z.push_back(disk_point(rng, radius));
  return {z, uniform(rng, 0, 2 * kPi)};
}

double matched_distance(const std::vector<cx>& a, const std::vector<cx>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  if (a.empty()) return 0.0;
  std::vector<std::vector<double>> cost(a.size(), std::vector<double>(b.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) cost[i][j] = std::abs(a[i] - b[j]);
  const auto col = min_cost_assignment(cost);
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, cost[i][col[i]]);
  return m;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

double disk_metric(double R, cx z) { return std::log(2 * R / (R * R - std::norm(z))); }

const std::vector<Property>& properties() {
  static const std::vector<Property> all = {
      {"disk", "grid_area",
       [](Rng&) {
         const auto g = make_grid(64, 128, 2.0);
         double s = 0;
         for (double w : g->quad_weights()) s += w;
         return Outcome{std::abs(s - kPi), 1e-6};
       }},
      {"disk", "poisson_reproduces_harmonic",
       [](Rng& rng) {
         const auto g = make_grid(64, 128, 2.0);
         std::vector<cx> c(6);
         for (auto& x : c) x = cx(uniform(rng, -1, 1), uniform(rng, -1, 1));
         auto h = [&](cx z) { return Poly(c)(z).real(); };
         const auto p = poisson_extend(tabulate_boundary(*g, h), g);
         return Outcome{max_abs_diff(p.values(), tabulate(*g, h)), 1e-4};
       }},
      {"disk", "green_potential_lebesgue",
       [](Rng&) {
         const auto g = make_grid(64, 128, 2.0);
         const auto u = green_potential(BlaschkeMeasureSpec::lebesgue(), g);
         return Outcome{max_abs_diff(u.values(), tabulate(*g, [](cx z) { return (1 - std::norm(z)) / 4; })), 1e-3};
       }},
      {"disk", "outer_function_linear_modulus",
       [](Rng& rng) {
         const auto g = make_grid(32, 128, 2.0);
         double worst = 0;
         for (int t = 0; t < 5; ++t) {
           const cx c = disk_point(rng, 1.0);
           const auto o = outer_function(tabulate_boundary(*g, [&](cx z) { return std::abs(2.0 - c * z); }), *g);
           const cx eta = o(0.0) / 2.0;
           for (int k = 0; k < 50; ++k) {
             const cx z = disk_point(rng, 0.95);
             worst = std::max(worst, std::abs(o(z) - eta * (2.0 - c * z)));
           }
         }
         return Outcome{worst, 1e-4};
       }},
      {"disk", "littlewood_paley",
       [](Rng& rng) {
         const auto g = make_grid(128, 256, 2.0);
         double worst = 0;
         for (int t = 0; t < 20; ++t) {
           const auto lp = littlewood_paley(random_poly(rng, 8), *g);
           worst = std::max(worst, std::abs(lp.lhs - lp.rhs) / lp.lhs);
         }
         return Outcome{worst, 1e-3};
       }},
      {"blaschke", "unimodular_on_circle",
       [](Rng& rng) {
         double worst = 0;
         for (int t = 0; t < 20; ++t) {
           const auto B = random_blaschke(rng, 1 + t % 4, 0.9);
           for (int k = 0; k < 64; ++k) worst = std::max(worst, std::abs(std::abs(B(std::polar(1.0, 0.1 * k))) - 1));
         }
         return Outcome{worst, 1e-12};
       }},
      {"blaschke", "critical_count",
       [](Rng& rng) {
         double bad = 0;
         for (int t = 0; t < 20; ++t) {
           const auto B = random_blaschke(rng, 1 + t % 4, 0.9);
           const auto c = critical_points(B);
           bad += static_cast<int>(c.size()) != B.degree() - 1;
           for (cx z : c) bad += !(std::abs(z) < 1);
         }
         return Outcome{bad, 0};
       }},
      {"blaschke", "critical_points_invariant_under_mobius",
       [](Rng& rng) {
         double worst = 0;
         for (int t = 0; t < 20; ++t) {
           const auto B = random_blaschke(rng, 2 + t % 3, 0.8);
           const MobiusDisk m(disk_point(rng, 0.8), uniform(rng, 0, 2 * kPi));
           worst = std::max(worst, matched_distance(critical_points(B), critical_points(mobius_apply(m, B))));
         }
         return Outcome{worst, 1e-8};
       }},
      {"blaschke", "mobius_inverse",
       [](Rng& rng) {
         double worst = 0;
         for (int t = 0; t < 20; ++t) {
           const MobiusDisk m(disk_point(rng, 0.9), uniform(rng, 0, 2 * kPi));
           const cx z = disk_point(rng, 0.99);
           worst = std::max(worst, std::abs(m.inverse()(m(z)) - z));
         }
         return Outcome{worst, 1e-12};
       }},
      {"blaschke", "normalize_idempotent",
       [](Rng& rng) {
         double worst = 0;
         for (int t = 0; t < 20; ++t) {
           const auto n1 = normalize(random_blaschke(rng, 2 + t % 3, 0.8)).first;
           const auto n2 = normalize(n1).first;
           worst = std::max(worst, matched_distance(n1.zeros, n2.zeros));
           worst = std::max(worst, std::abs(std::remainder(n1.rotation - n2.rotation, 2 * kPi)));
         }
         return Outcome{worst, 1e-9};
       }},
      {"blaschke", "schwarz_pick",
       [](Rng& rng) {
         const auto g = make_grid(32, 64, 2.0);
         double worst = -1;
         for (int t = 0; t < 10; ++t) {
           const auto pm = pullback(SelfMap::blaschke(random_blaschke(rng, 1 + t % 3, 0.9)), std::nullopt, g);
           const auto ud = tabulate(*g, [](cx z) { return std::log(2 / (1 - std::norm(z))); });
           for (std::size_t k = 0; k < ud.size(); ++k) worst = std::max(worst, pm.u_field.values()[k] - ud[k]);
         }
         return Outcome{worst, 1e-9};
       }},
      {"gce", "closed_form_R2",
       [](Rng&) {
         const auto g = make_grid(64, 128, 2.0);
         const auto sol = solve_gce(GceProblem::constant(HoloFn::constant(1.0), std::log(4.0 / 3.0), g));
         const double err = max_abs_diff(sol.u.values(), tabulate(*g, [](cx z) { return disk_metric(2.0, z); }));
         return Outcome{sol.converged ? err : INFINITY, 1e-3};
       }},
      {"gce", "weak_residual_closed_form",
       [](Rng&) {
         const auto g = make_grid(64, 128, 2.0);
         auto f = [](cx z) { return disk_metric(2.0, z); };
         const ScalarField u(g, tabulate(*g, f), tabulate_boundary(*g, f));
         return Outcome{residual(u, GceProblem::constant(HoloFn::constant(1.0), std::log(4.0 / 3.0), g),
                                 ResidualMode::weak),
                        1e-4};
       }},
      {"gce", "uniqueness",
       [](Rng& rng) {
         const auto g = make_grid(32, 64, 2.0);
         double worst = 0;
         for (int t = 0; t < 5; ++t) {
           const auto pb = GceProblem::constant(random_poly(rng, 3), uniform(rng, -2, 2), g);
           const auto a = solve_gce(pb);
           std::vector<double> low = pb.harmonic_majorant().values();
           for (double& v : low) v -= 5;
           const auto b = solve_gce(pb, 1e-10, 100, ScalarField(g, low));
           worst = std::max(worst, a.converged && b.converged ? max_abs_diff(a.u.values(), b.u.values()) : INFINITY);
         }
         return Outcome{worst, 1e-8};
       }},
      {"gce", "comparison_principle",
       [](Rng& rng) {
         const auto g = make_grid(32, 64, 2.0);
         double violations = 0;
         for (int t = 0; t < 10; ++t) {
           const auto H = random_poly(rng, 3);
           const double c = uniform(rng, -1, 1), a = uniform(rng, 0, 2 * kPi);
           const auto h1 = tabulate_boundary(*g, [&](cx z) { return c + 0.5 * std::cos(std::arg(z) + a); });
           auto h2 = h1;
           const double lift = uniform(rng, 0, 1);
           for (double& v : h2) v += lift * (1 + std::sin(3 * v)) / 2;
           const GceProblem p1(H, h1, g), p2(H, h2, g);
           const auto rep = check_comparison(solve_gce(p1).u, solve_gce(p2).u, p1);
           violations += static_cast<double>(rep.violations.size());
         }
         return Outcome{violations, 0};
       }},
      {"gce", "picard_sandwich",
       [](Rng& rng) {
         const auto g = make_grid(64, 128, 2.0);
         const GreenOperator op(g);
         const auto pb = GceProblem::constant(random_poly(rng, 2), uniform(rng, -1, 1), g);
         const auto newton = solve_gce(pb);
         ScalarField v = pb.harmonic_majorant(), prev = v;
         for (int k = 1; k <= 50; ++k) {
           prev = v;
           v = picard_step(v, pb, op);
         }
         double worst = 0;
         for (std::size_t k = 0; k < g->size(); ++k) {
           const double u = newton.u.values()[k];
           worst = std::max({worst, prev.values()[k] - u, u - v.values()[k]});
         }
         return Outcome{newton.converged ? worst : INFINITY, 1e-3};
       }},
      {"canonical", "heins_examples",
       [](Rng&) {
         double worst = 0;
         for (const std::vector<cx>& C : std::vector<std::vector<cx>>{{0.0}, {0.4}, {cx(0, 0.3)}, {0.2, -0.3}})
           worst = std::max(worst, matched_distance(critical_points(heins_solve(C).product), C));
         return Outcome{worst, 1e-6};
       }},
      {"canonical", "heins_path_independence",
       [](Rng& rng) {
         double worst = 0;
         for (int t = 0; t < 6; ++t) {
           std::vector<cx> C, W;
           for (int k = 0; k <= t % 3; ++k) C.push_back(disk_point(rng, 0.7));
           for (std::size_t k = 0; k < C.size(); ++k) W.push_back(disk_point(rng, 0.6));
           worst = std::max(worst, matched_distance(heins_solve(C).product.zeros, heins_solve(C, 1e-6, {W}).product.zeros));
         }
         return Outcome{worst, 1e-6};
       }},
      {"canonical", "liouville_round_trip",
       [](Rng& rng) {
         const auto g = make_grid(64, 128, 2.0);
         double worst = 0;
         for (int t = 0; t < 10; ++t) {
           const auto B = random_blaschke(rng, 1 + t % 3, 0.8);
           const auto H = HoloFn::polynomial(B.derivative_numerator().c);
           const auto L = liouville_extract(pullback(SelfMap::blaschke(B), H, g).u_field, H);
           const auto N = normalize(B).first;
           for (int i = 0; i < L.rings; ++i)
             for (int j = 0; j < g->n_theta(); ++j) worst = std::max(worst, std::abs(L.at(i, j) - N(g->node(i, j))));
         }
         return Outcome{worst, 1e-3};
       }},
      {"canonical", "q_holomorphy_negative_control",
       [](Rng& rng) {
         const auto g = make_grid(64, 128, 2.0);
         const auto B = random_blaschke(rng, 2, 0.7);
         const auto H = HoloFn::polynomial(B.derivative_numerator().c);
         const auto u = pullback(SelfMap::blaschke(B), H, g).u_field;
         LiouvilleOptions lax;
         lax.cr_tol = INFINITY;
         const double good = liouville_extract(u, H, lax).cr_residual;
         std::vector<double> v = u.values();
         for (std::size_t k = 0; k < v.size(); ++k) v[k] += 0.01 * std::norm(g->node(k / g->n_theta(), k % g->n_theta()));
         const double bad = liouville_extract(ScalarField(g, v), H, lax).cr_residual;
         return Outcome{bad / good, 100, true};
       }},
      {"canonical", "canonical_limit_constant_weight",
       [](Rng&) {
         const auto R = canonical_solution(HoloFn::constant(1.0), 0.8, 8.0, 1e-12);
         const auto& g = *R.u_infinity.grid();
         double err = 0;
         for (int i = 0; i < g.n_r() && g.radii()[i] <= 0.8; ++i)
           for (int j = 0; j < g.n_theta(); ++j)
             err = std::max(err, std::abs(R.u_infinity.at(i, j) - std::log(2 / (1 - std::norm(g.node(i, j))))));
         return Outcome{R.monotone ? err : INFINITY, 1e-2};
       }},
      {"canonical", "maximal_domination",
       [](Rng&) {
         const auto g = make_grid(64, 128, 3.0);
         double worst = INFINITY;
         for (const auto& H : {HoloFn::constant(1.0), HoloFn::polynomial({0.0, 1.0}), HoloFn::polynomial({0.0, -0.5, 1.0})}) {
           const auto um = maximal_solution(H, g).u.values();
           const auto u0 = solve_gce(GceProblem::constant(H, 0.0, g)).u.values();
           for (std::size_t k = 0; k < um.size(); ++k) worst = std::min(worst, um[k] - u0[k]);
         }
         return Outcome{worst, 0, true};
       }},
      {"canonical", "boundary_liminf",
       [](Rng&) {
         const auto rep = boundary_growth_probe(HoloFn::polynomial({-2.0, 1.0}), {0, 1, 2, 3}, {0, 2 * kPi});
         double bad = !rep.probe_increasing + !rep.all_liminf_ok;
         for (const auto& l : rep.levels) bad += l.interior_excess >= 0;
         return Outcome{bad, 0};
       }},
      {"canonical", "generator_family_multiple_of_derivative",
       [](Rng& rng) {
         const auto g = make_grid(32, 128, 2.0);
         double worst = 0;
         for (int t = 0; t < 5; ++t) {
           const auto I0 = random_blaschke(rng, 1 + t % 3, 0.7);
           const double r = uniform(rng, 0.1, 0.9);
           const auto Hr = generator_family(I0, r, *g);
           for (int k = 0; k < 10; ++k) {
             const cx z = disk_point(rng, 0.9);
             worst = std::max(worst, std::abs(Hr(z) - 2 * r / (1 - r * r) * I0.derivative(z)) / (1 + std::abs(Hr(z))));
           }
         }
         return Outcome{worst, 1e-8};
       }},
  };
  return all;
}

}  // namespace

const std::vector<std::string>& verify_suites() {
  static const std::vector<std::string> s{"disk", "blaschke", "gce", "canonical", "all"};
  return s;
}

std::uint64_t derive_seed(std::uint64_t root, const std::string& name) {
  // FNV-1a over the name, mixed with the root by splitmix64.
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : name) h = (h ^ c) * 1099511628211ull;
  std::uint64_t z = root + 0x9e3779b97f4a7c15ull * (h | 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::vector<PropertyResult> run_verify(const std::string& suite, std::uint64_t seed) {
  if (std::find(verify_suites().begin(), verify_suites().end(), suite) == verify_suites().end())
    throw InvalidInput("unknown suite '" + suite + "'");
  std::vector<PropertyResult> out;
  for (const auto& p : properties()) {
    if (suite != "all" && suite != p.suite) continue;
    PropertyResult r;
    r.suite = p.suite;
    r.name = p.name;
    r.seed = derive_seed(seed, std::string(p.suite) + "/" + p.name);
    Rng rng(r.seed);
    try {
      const Outcome o = p.run(rng);
      r.measure = o.measure;
      r.threshold = o.threshold;
      r.at_least = o.at_least;
      r.passed = o.at_least ? o.measure >= o.threshold : o.measure <= o.threshold;
    } catch (const std::exception& e) {
      r.error = e.what();
      r.measure = std::numeric_limits<double>::quiet_NaN();
      r.passed = false;
    }
    out.push_back(r);
  }
  return out;
}

}  // namespace gcelab
