#pragma once

#include <optional>
#include <span>
#include <vector>

#include "gcelab/grid.h"
#include "gcelab/holo.h"

namespace gcelab {

/// Area integral of nodal values with the grid weights.
double integrate(const DiskGrid& grid, std::span<const double> values);

/// Green's function of the disk, log|(1 - z conj(w)) / (z - w)|.
double green_kernel(cx z, cx w);

/// Harmonic extension of boundary samples h (taken at the grid's boundary
/// angles). Interior values are the Poisson integral of the trigonometric
/// interpolant of h, evaluated through its Fourier multipliers r^|k|; the
/// returned field carries h as its boundary trace.
ScalarField poisson_extend(std::span<const double> h, const GridPtr& grid);

struct PointMass {
  cx location;
  double mass;
};

/// Blaschke measure mu = |modulus|^2 * weight * dA + sum of point masses.
/// Missing density factors count as 1; `area_density = false` drops the
/// absolutely continuous part entirely.
struct BlaschkeMeasureSpec {
  std::optional<HoloFn> modulus;
  std::optional<ScalarField> weight;
  std::vector<PointMass> point_masses;
  bool area_density = true;

  static BlaschkeMeasureSpec lebesgue() { return {}; }
  static BlaschkeMeasureSpec point(cx location, double mass) {
    BlaschkeMeasureSpec s;
    s.area_density = false;
    s.point_masses.push_back({location, mass});
    return s;
  }
  static BlaschkeMeasureSpec weighted(HoloFn h) {
    BlaschkeMeasureSpec s;
    s.modulus = std::move(h);
    return s;
  }

  /// Absolutely continuous density at every interior node of `grid`.
  std::vector<double> nodal_density(const DiskGrid& grid) const;
  /// Density at an arbitrary interior point.
  double density_at(cx z) const;
};

/// int (1 - |z|^2) d mu by quadrature plus exact point-mass terms.
double blaschke_mass(const BlaschkeMeasureSpec& mu, const DiskGrid& grid);

/// Discretized Green operator rho -> (1/2pi) int G(z_k, w) rho(w) dA(w) on the
/// nodes of one grid.
///
/// The kernel depends only on the two radii and the angle difference, so it is
/// tabulated once per grid (n_r^2 * n_theta entries) and applied as a circular
/// convolution per ring pair. The logarithmic self-cell is handled by
/// singularity subtraction: the density at the target node is integrated
/// against the kernel exactly, (1/2pi) int G(z, w) dA(w) = (1 - |z|^2)/4.
class GreenOperator {
 public:
  explicit GreenOperator(GridPtr grid);

  std::vector<double> apply(std::span<const double> density) const;
  const GridPtr& grid() const { return grid_; }

 private:
  GridPtr grid_;
  std::vector<double> kernel_;      // [(i * n_r + i2) * 2n + m], m in [0, 2n)
  std::vector<double> correction_;  // per target ring
};

/// G_mu on the grid nodes with a zero boundary trace. Rejects point masses
/// outside the open disk or on a node, and non-finite Blaschke mass.
ScalarField green_potential(const BlaschkeMeasureSpec& mu, const GridPtr& grid);
ScalarField green_potential(const BlaschkeMeasureSpec& mu, const GreenOperator& op);

/// G_mu at an arbitrary interior point, using the grid as the quadrature rule.
double green_potential_at(const BlaschkeMeasureSpec& mu, const DiskGrid& grid, cx z);

/// Outer function with boundary modulus w (sampled at the boundary angles).
HoloFn outer_function(std::span<const double> w, const DiskGrid& grid);

/// (int |f|^p (1 - |z|)^alpha dA)^(1/p).
double bergman_norm(const HoloFn& f, double p, double alpha, const DiskGrid& grid);

/// Constant in ||f||^2_{H^2} = |f(0)|^2 + c int |f'|^2 log(1/|z|) dA with dA
/// Lebesgue area measure; f(z) = z pins c = 2/pi.
inline constexpr double kLittlewoodPaleyConstant = 0.63661977236758134308;  // 2/pi

struct LittlewoodPaley {
  double lhs;  // ||f||^2_{H^2} from boundary samples
  double rhs;  // |f(0)|^2 + c int |f'|^2 log(1/|z|) dA
};

LittlewoodPaley littlewood_paley(const HoloFn& f, const DiskGrid& grid);

}  // namespace gcelab
