#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "gcelab/blaschke.h"
#include "gcelab/gce.h"

namespace gcelab {

/// Holomorphic self-map I recovered from a solution u of Δu = |H|^2 e^{2u},
/// normalized by I(0) = 0 and a positive leading Taylor coefficient, so that
/// e^{u + log|H|} = 2|I'| / (1 - |I|^2).
struct LiouvilleMap {
  GridPtr grid;
  double rho = 0.0;        // compact radius; nodes with r <= rho are filled
  int rings = 0;           // number of filled rings
  std::vector<cx> values;  // I on the filled rings, laid out like a field
  std::vector<cx> derivative;
  std::vector<cx> Q;          // w_zz - w_z^2 on the filled rings
  double cr_residual = 0.0;   // max |d Q / d zbar| away from zeros of H
  double validation = 0.0;    // max |log(2|I'|/(1 - |I|^2)) - w|
  double ray_consistency = 0.0;  // max mismatch of one angular step between neighboring rays
  std::vector<std::pair<double, double>> inner_profile;  // per ring: (min, mean) of |I|

  cx at(int i, int j) const { return values[grid->index(i, j)]; }
  cx derivative_at(int i, int j) const { return derivative[grid->index(i, j)]; }
  /// |I'| / (1 - |I|^2) at a filled node.
  double hyperbolic_density(int i, int j) const;
};

struct LiouvilleOptions {
  double rho = 0.7;
  /// Extraction is refused when cr_residual exceeds this (InvalidInput).
  double cr_tol = 1e-2;
  /// Nodes this close to a zero of H are left out of cr_residual.
  double zero_exclusion = 0.1;
};

/// cr_residual is computed as |∂_zbar(u_zz - u_z^2) - (H'/H) u_{z zbar}|, which
/// equals |∂_zbar Q| with the holomorphic log|H| terms differentiated exactly.
///
/// Integrates I' = g H, g'/g = 2 u_z - 2 conj(I) g H / (1 - |I|^2) along the
/// radial rays through the grid angles with RK4, starting from I(0) = 0 and
/// |g(0)| = e^{u(0)}/2. Throws InconsistencyError when |I| >= 1 on the compact.
LiouvilleMap liouville_extract(const ScalarField& u, const HoloFn& H, const LiouvilleOptions& opts = {});

/// Minimum-cost assignment (Hungarian method) for a square cost matrix;
/// returns col[row].
std::vector<int> min_cost_assignment(const std::vector<std::vector<double>>& cost);

struct HeinsResult {
  BlaschkeProduct product;
  std::vector<cx> targets;      // the requested critical points
  std::vector<cx> recovered;    // critical points of product, matched to targets
  std::vector<double> distances;
  double assignment_residual = 0.0;  // max matched distance
  int steps = 0;                     // accepted continuation steps
};

/// Degree-d Blaschke product with F(0) = 0, rotation 0 and the given d - 1
/// critical points. Continuation from {0, ..., 0} (F = z^d) along straight
/// segments through the optional waypoints, Newton on the monic factor P of
/// the numerator zP at each step.
HeinsResult heins_solve(const std::vector<cx>& critical, double tol = 1e-6,
                        const std::vector<std::vector<cx>>& waypoints = {});

/// F = heins_solve(zeros of H), u = log(2|F'| / (1 - |F|^2)) - log|H|.
struct MaximalSolution {
  ScalarField u;
  BlaschkeProduct F;
};
MaximalSolution maximal_solution(const HoloFn& H, const GridPtr& grid);

/// max |Δu - |H|^2 e^{2u}| / (1 + |H|^2 e^{2u}) over nodes with r <= rho, with
/// the high-order smooth_laplacian. Meant for closed-form fields, where the
/// finite-volume residual would only show truncation error at the innermost ring.
double interior_residual(const ScalarField& u, const HoloFn& H, double rho);

struct CanonicalOptions {
  GridSpec grid{64, 128, 3.0};
  std::vector<double> schedule{0, 1, 2, 4, 6, 8};
  double solve_tol = 1e-10;
  int max_iter = 200;
  bool extract = true;
  LiouvilleOptions liouville{};
};

struct CanonicalResult {
  std::vector<double> n_values{};
  std::vector<GceSolution> solutions{};
  double rho = 0.0;
  ScalarField u_infinity;   // last iterate plus tail estimate; meaningful on r <= rho
  std::vector<double> uncertainty{};  // per node
  double last_change = 0.0;         // max |u_n - u_prev| on the compact
  bool converged_on_compact = false;
  bool monotone = false;
  bool complete = true;  // false when an inner solve failed
  std::optional<LiouvilleMap> liouville{};
  std::vector<std::pair<double, double>> deficiency_profile{};  // (r, ∫(u_D - u) dθ)
};

/// Ladder of solutions with boundary values n. Stops when successive
/// solutions differ by less than tol on r <= rho or the schedule (extended in
/// steps of 2) passes n_max.
CanonicalResult canonical_solution(const HoloFn& H, double rho, double n_max, double tol,
                                   const CanonicalOptions& opts = {});

struct CanonicalVsMaximal {
  bool coincide = false;
  double gap = 0.0;              // max |u_can - u_max| on the compact
  std::vector<double> gap_field{};  // per node on the compact, 0 elsewhere
  double density_gap = 0.0;       // max | |I'|/(1-|I|^2) - |F'|/(1-|F|^2) |
  CanonicalResult canonical;
  BlaschkeProduct F;
};
CanonicalVsMaximal canonical_vs_maximal(const HoloFn& H, double rho = 0.8, double tol = 1e-2,
                                        const CanonicalOptions& opts = {});

/// Per radius, ∫ (log(2/(1 - r^2)) - u(r e^{iθ})) dθ over the grid angles.
std::vector<double> deficiency(const ScalarField& u, const std::vector<double>& r_values);

struct GrowthLevel {
  double n;
  double probe_value;     // min over the arc at the probe radius
  double boundary_min;    // min over the arc on the outermost ring
  double interior_excess; // max over interior nodes of u_n - n
  bool liminf_ok;         // boundary_min >= n - eps
};
struct GrowthReport {
  std::vector<GrowthLevel> levels;
  bool probe_increasing = false;
  bool all_liminf_ok = false;
  double probe_radius = 0.95;
};

/// Solves the ladder for the given levels and reports near-boundary values on
/// the arc theta in [arc.first, arc.second] (full circle if the arc spans 2pi).
GrowthReport boundary_growth_probe(const HoloFn& H, const std::vector<double>& n_values,
                                   std::pair<double, double> arc, double probe_radius = 0.95,
                                   double eps = 0.1, const GridSpec& grid = {64, 128, 3.0});

/// H_r = (2r / phi_r) I0' with phi_r the outer function of modulus
/// 1 - |r I0|^2 on the circle, sampled at the grid's boundary angles.
HoloFn generator_family(const BlaschkeProduct& I0, double r, const DiskGrid& grid);

}  // namespace gcelab
