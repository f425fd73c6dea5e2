#pragma once

#include <Eigen/SparseCore>
#include <optional>
#include <span>
#include <vector>

#include "gcelab/grid.h"

namespace gcelab {

/// Finite-volume polar Laplacian in flux form.
///
/// For node k, (A u)_k + b_k is the net flux out of its cell, so the pointwise
/// Laplacian is ((A u)_k + b_k) / cell_volume. A is symmetric negative
/// semidefinite; b carries the boundary values seen by the outermost ring.
/// There is no flux through the origin, so no center node is needed.
struct FluxLaplacian {
  Eigen::SparseMatrix<double> A;
  std::vector<double> volume;  // per node

  explicit FluxLaplacian(const DiskGrid& grid);
  /// b for a given boundary trace.
  std::vector<double> boundary_term(const DiskGrid& grid, std::span<const double> trace) const;
};

/// Pointwise discrete Laplacian. Without a boundary trace the outermost ring
/// is left as NaN.
std::vector<double> laplacian(const DiskGrid& grid, std::span<const double> u,
                              const std::optional<std::vector<double>>& trace);
inline std::vector<double> laplacian(const ScalarField& f) {
  return laplacian(*f.grid(), f.values(), f.boundary());
}

/// High-order Laplacian for smooth fields: nine-point stencils along the
/// diameter through each node and along each ring. Used for
/// diagnostics; the solver works with FluxLaplacian.
std::vector<double> smooth_laplacian(const DiskGrid& grid, std::span<const double> u,
                                     const std::optional<std::vector<double>>& trace);

/// Polar gradient (f_r, f_theta) at every node, with the same stencils as
/// smooth_laplacian.
struct PolarGradient {
  std::vector<double> dr;
  std::vector<double> dtheta;
};
PolarGradient polar_gradient(const DiskGrid& grid, std::span<const double> f,
                             const std::optional<std::vector<double>>& trace);

/// Wirtinger derivatives of a complex nodal field (real and imaginary parts
/// differentiated separately).
std::vector<cx> d_z(const DiskGrid& grid, std::span<const cx> f,
                    const std::optional<std::vector<cx>>& trace = std::nullopt);
std::vector<cx> d_zbar(const DiskGrid& grid, std::span<const cx> f,
                       const std::optional<std::vector<cx>>& trace = std::nullopt);

}  // namespace gcelab
