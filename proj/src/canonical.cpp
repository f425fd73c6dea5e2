#include "gcelab/canonical.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "gcelab/errors.h"
#include "gcelab/stencil.h"

namespace gcelab {

namespace {
constexpr double kPi = std::numbers::pi;

int rings_within(const DiskGrid& g, double rho) {
  int n = 0;
  while (n < g.n_r() && g.radii()[n] <= rho) ++n;
  return n;
}
}  // namespace

MaximalSolution maximal_solution(const HoloFn& H, const GridPtr& grid) {
  const auto zs = H.zeros();
  const auto heins = heins_solve(zs);
  auto pm = pullback(SelfMap::blaschke(heins.product), H, grid);
  return {std::move(pm.u_field), heins.product};
}

double interior_residual(const ScalarField& u, const HoloFn& H, double rho) {
  const DiskGrid& g = *u.grid();
  const auto lap = smooth_laplacian(g, u.values(), std::nullopt);
  // Radial stencils reaching past the last ring are one-sided without a trace.
  const int rings = std::min(rings_within(g, rho), g.n_r() - 4);
  double worst = 0.0;
  for (int i = 0; i < rings; ++i)
    for (int j = 0; j < g.n_theta(); ++j) {
      const std::size_t k = g.index(i, j);
      const double src = std::norm(H(g.node(i, j))) * std::exp(2.0 * u.values()[k]);
      worst = std::max(worst, std::abs(lap[k] - src) / (1.0 + src));
    }
  return worst;
}

std::vector<double> deficiency(const ScalarField& u, const std::vector<double>& r_values) {
  const DiskGrid& g = *u.grid();
  std::vector<double> out;
  out.reserve(r_values.size());
  for (double r : r_values) {
    if (!(r >= 0.0) || !(r < 1.0)) throw InvalidInput("deficiency: radii must lie in [0, 1)");
    const double ud = std::log(2.0 / (1.0 - r * r));
    double s = 0.0;
    for (int j = 0; j < g.n_theta(); ++j) s += ud - u.sample_ray(j, r);
    out.push_back(s * g.dtheta());
  }
  return out;
}

CanonicalResult canonical_solution(const HoloFn& H, double rho, double n_max, double tol,
                                   const CanonicalOptions& opts) {
  if (!(rho > 0.0) || rho > 0.95) throw InvalidInput("canonical_solution: rho must lie in (0, 0.95]");
  if (!(tol > 0.0)) throw InvalidInput("canonical_solution: tolerance must be positive");
  std::vector<double> schedule;
  for (double n : opts.schedule)
    if (n <= n_max) schedule.push_back(n);
  std::sort(schedule.begin(), schedule.end());
  if (schedule.empty()) throw InvalidInput("canonical_solution: empty schedule below n_max");
  while (schedule.back() + 2.0 <= n_max) schedule.push_back(schedule.back() + 2.0);

  const auto grid = make_grid(opts.grid);
  const DiskGrid& g = *grid;
  const int rings = rings_within(g, rho);

  CanonicalResult res{.rho = rho, .u_infinity = ScalarField(grid, std::vector<double>(g.size(), 0.0))};
  for (double n : schedule) {
    const auto pb = GceProblem::constant(H, n, grid);
    std::optional<ScalarField> init;
    if (!res.solutions.empty()) {
      // u_prev + (n - n_prev) is a supersolution with the right boundary value.
      std::vector<double> v = res.solutions.back().u.values();
      for (double& x : v) x += n - res.n_values.back();
      init = ScalarField(grid, std::move(v), pb.h);
    }
    auto sol = solve_gce(pb, opts.solve_tol, opts.max_iter, init);
    if (!sol.converged) {
      res.complete = false;
      break;
    }
    if (!res.solutions.empty()) {
      const auto& prev = res.solutions.back().u.values();
      double change = 0.0;
      for (int i = 0; i < rings; ++i)
        for (int j = 0; j < g.n_theta(); ++j) {
          const std::size_t k = g.index(i, j);
          change = std::max(change, std::abs(sol.u.values()[k] - prev[k]));
        }
      res.last_change = change;
    }
    res.n_values.push_back(n);
    res.solutions.push_back(std::move(sol));
    if (res.solutions.size() >= 2 && res.last_change < tol) {
      res.converged_on_compact = true;
      break;
    }
  }
  if (res.solutions.empty()) throw ConvergenceError("canonical_solution: the first level did not converge");

  res.monotone = true;
  for (std::size_t s = 1; s < res.solutions.size(); ++s) {
    const auto& a = res.solutions[s - 1].u.values();
    const auto& b = res.solutions[s].u.values();
    for (std::size_t k = 0; k < a.size(); ++k) res.monotone = res.monotone && (b[k] >= a[k] - 1e-9);
  }

  // Geometric tail from the last two increments, per node.
  const std::size_t K = res.solutions.size();
  std::vector<double> uinf = res.solutions.back().u.values();
  res.uncertainty.assign(g.size(), std::numeric_limits<double>::infinity());
  if (K >= 3) {
    const auto& a = res.solutions[K - 3].u.values();
    const auto& b = res.solutions[K - 2].u.values();
    const auto& c = res.solutions[K - 1].u.values();
    for (std::size_t k = 0; k < g.size(); ++k) {
      const double last = std::max(0.0, c[k] - b[k]);
      const double prev = b[k] - a[k];
      const double q = prev > 0.0 ? std::clamp(last / prev, 0.0, 0.95) : 0.0;
      const double tail = last * q / (1.0 - q);
      uinf[k] += tail;
      res.uncertainty[k] = std::max(tail, last);
    }
  } else if (K == 2) {
    const auto& b = res.solutions[0].u.values();
    const auto& c = res.solutions[1].u.values();
    for (std::size_t k = 0; k < g.size(); ++k) res.uncertainty[k] = std::abs(c[k] - b[k]);
  }
  res.u_infinity = ScalarField(grid, std::move(uinf));

  if (opts.extract) {
    LiouvilleOptions lo = opts.liouville;
    lo.rho = std::min(rho, g.radii()[g.n_r() - 2]);
    lo.cr_tol = std::numeric_limits<double>::infinity();  // reported, not enforced, on extrapolated data
    res.liouville = liouville_extract(res.u_infinity, H, lo);
  }
  std::vector<double> radii(g.radii().begin(), g.radii().begin() + rings);
  const auto def = deficiency(res.u_infinity, radii);
  for (int i = 0; i < rings; ++i) res.deficiency_profile.emplace_back(radii[i], def[i]);
  return res;
}

CanonicalVsMaximal canonical_vs_maximal(const HoloFn& H, double rho, double tol, const CanonicalOptions& opts) {
  CanonicalOptions o = opts;
  o.extract = true;
  auto can = canonical_solution(H, rho, 8.0, 1e-12, o);
  const auto grid = can.u_infinity.grid();
  const DiskGrid& g = *grid;
  auto mx = maximal_solution(H, grid);
  CanonicalVsMaximal out{.canonical = std::move(can), .F = mx.F};
  out.gap_field.assign(g.size(), 0.0);
  const int rings = rings_within(g, rho);
  const auto& lm = *out.canonical.liouville;
  for (int i = 0; i < rings; ++i)
    for (int j = 0; j < g.n_theta(); ++j) {
      const std::size_t k = g.index(i, j);
      const double gap = std::abs(out.canonical.u_infinity.values()[k] - mx.u.values()[k]);
      out.gap_field[k] = gap;
      out.gap = std::max(out.gap, gap);
      if (i < lm.rings) {
        const cx z = g.node(i, j);
        const double df = std::abs(out.F.derivative(z)) / (1.0 - std::norm(out.F(z)));
        out.density_gap = std::max(out.density_gap, std::abs(lm.hyperbolic_density(i, j) - df));
      }
    }
  out.coincide = out.gap <= tol;
  return out;
}

GrowthReport boundary_growth_probe(const HoloFn& H, const std::vector<double>& n_values,
                                   std::pair<double, double> arc, double probe_radius, double eps,
                                   const GridSpec& spec) {
  if (n_values.empty()) throw InvalidInput("boundary_growth_probe: no levels");
  if (!(probe_radius > 0.0 && probe_radius < 1.0)) throw InvalidInput("boundary_growth_probe: probe radius in (0, 1)");
  if (!(arc.second > arc.first)) throw InvalidInput("boundary_growth_probe: empty arc");
  const auto grid = make_grid(spec);
  const DiskGrid& g = *grid;
  const bool full = arc.second - arc.first >= 2.0 * kPi;
  auto on_arc = [&](double th) {
    if (full) return true;
    const double rel = std::fmod(std::fmod(th - arc.first, 2.0 * kPi) + 2.0 * kPi, 2.0 * kPi);
    return rel <= arc.second - arc.first;
  };
  std::vector<int> arc_j;
  for (int j = 0; j < g.n_theta(); ++j)
    if (on_arc(g.angles()[j])) arc_j.push_back(j);
  if (arc_j.empty()) throw InvalidInput("boundary_growth_probe: arc contains no grid angle");

  GrowthReport rep;
  rep.probe_radius = probe_radius;
  std::optional<ScalarField> prev;
  double prev_n = 0.0;
  for (double n : n_values) {
    const auto pb = GceProblem::constant(H, n, grid);
    std::optional<ScalarField> init;
    if (prev && n >= prev_n) {
      std::vector<double> v = prev->values();
      for (double& x : v) x += n - prev_n;
      init = ScalarField(grid, std::move(v), pb.h);
    }
    const auto sol = solve_gce(pb, 1e-10, 200, init);
    if (!sol.converged) throw ConvergenceError("boundary_growth_probe: level solve did not converge");
    GrowthLevel lv{n, std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
                   -std::numeric_limits<double>::infinity(), false};
    for (int j : arc_j) {
      lv.probe_value = std::min(lv.probe_value, sol.u.sample_ray(j, probe_radius));
      lv.boundary_min = std::min(lv.boundary_min, sol.u.at(g.n_r() - 1, j));
    }
    for (double v : sol.u.values()) lv.interior_excess = std::max(lv.interior_excess, v - n);
    lv.liminf_ok = lv.boundary_min >= n - eps;
    rep.levels.push_back(lv);
    prev = sol.u;
    prev_n = n;
  }
  rep.probe_increasing = true;
  rep.all_liminf_ok = true;
  for (std::size_t k = 0; k < rep.levels.size(); ++k) {
    if (k > 0) rep.probe_increasing = rep.probe_increasing && rep.levels[k].probe_value > rep.levels[k - 1].probe_value;
    rep.all_liminf_ok = rep.all_liminf_ok && rep.levels[k].liminf_ok;
  }
  return rep;
}

HoloFn generator_family(const BlaschkeProduct& I0, double r, const DiskGrid& grid) {
  if (!(r > 0.0 && r < 1.0)) throw InvalidInput("generator_family: r must lie in (0, 1)");
  std::vector<double> inv(grid.n_theta());
  for (int j = 0; j < grid.n_theta(); ++j) inv[j] = 1.0 / (1.0 - r * r * std::norm(I0(grid.boundary_node(j))));
  // 1/phi_r is the outer function of the reciprocal modulus.
  return HoloFn::product({outer_function(inv, grid), HoloFn::blaschke_derivative(I0)}, 2.0 * r);
}

}  // namespace gcelab
