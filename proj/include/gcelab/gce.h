#pragma once

#include <optional>
#include <vector>

#include "gcelab/grid.h"
#include "gcelab/holo.h"
#include "gcelab/potential.h"

namespace gcelab {

/// Δu = |H|^2 e^{2u} in the disk, u = h on the circle.
struct GceProblem {
  HoloFn H;
  std::vector<double> h;  // one sample per boundary angle
  GridPtr grid;

  GceProblem(HoloFn H, std::vector<double> h, GridPtr grid);
  static GceProblem constant(HoloFn H, double h, GridPtr grid);

  /// |H|^2 at every node.
  std::vector<double> density() const;
  ScalarField harmonic_majorant() const { return poisson_extend(h, grid); }
};

enum class Method { newton, picard };

struct GceSolution {
  ScalarField u;
  /// max over nodes of |Δ_h u - |H|^2 e^{2u}| / (1 + |H|^2 e^{2u}).
  double pde_residual = 0.0;
  double weak_residual = 0.0;
  /// Rounding floor of pde_residual for this field; tolerances below it
  /// cannot be certified, so convergence is judged against max(tol, floor).
  double residual_floor = 0.0;
  int iterations = 0;
  bool converged = false;
  Method method = Method::newton;
  int clamp_events = 0;
};

/// Damped Newton on the finite-volume discretization. Starts from `init` when
/// given, else from the harmonic extension of h. The returned flags are
/// recomputed from the final field. Throws ConvergenceError when the iterate
/// becomes non-finite.
GceSolution solve_gce(const GceProblem& problem, double tol = 1e-10, int max_iter = 100,
                      const std::optional<ScalarField>& init = std::nullopt);

/// One step of T v = P_h - G(|H|^2 e^{2v} dA). Rejects v above P_h + 1e-6.
ScalarField picard_step(const ScalarField& v, const GceProblem& problem, const GreenOperator& op);
ScalarField picard_step(const ScalarField& v, const GceProblem& problem);

enum class ResidualMode { stencil, weak };
/// stencil: scaled pointwise residual as in GceSolution::pde_residual (uses the
/// problem's h as boundary value). weak: max over the bump family of
/// |∫ u Δφ - ∫ |H|^2 e^{2u} φ|.
double residual(const ScalarField& u, const GceProblem& problem, ResidualMode mode);

/// Bump (1 - t^2)^6, t = (r - center)/delta, supported in the annulus
/// |r - center| < delta, times cos(m theta + alpha).
struct Bump {
  double center;
  double delta;
  int m;
  double alpha;

  double value(cx z) const;
  double laplacian(cx z) const;
};
/// The fixed family of 20 test functions (three support scales).
const std::vector<Bump>& weak_test_family();

struct ComparisonViolation {
  int i, j;
  cx z;
  double excess;  // u - v
};

struct ComparisonReport {
  std::vector<ComparisonViolation> violations;
  double max_difference;  // max (u - v) over interior nodes
  double sub_defect;      // max scaled violation of Δu >= |H|^2 e^{2u}
  double super_defect;    // max scaled violation of Δv <= |H|^2 e^{2v}
};

/// Checks u <= v + eps at every interior node. u must be a discrete
/// subsolution and v a supersolution (within stencil_tol, scaled as in
/// pde_residual), both with boundary traces and u <= v on the circle;
/// otherwise throws InvalidInput.
ComparisonReport check_comparison(const ScalarField& u, const ScalarField& v, const GceProblem& problem,
                                  double eps = 1e-6, double stencil_tol = 1e-3);

}  // namespace gcelab
