#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <vector>

namespace gcelab {

using cx = std::complex<double>;

struct GridSpec {
  int n_r = 64;
  int n_theta = 128;
  double refinement = 2.0;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Tensor polar grid on the unit disk.
///
/// Radii are r_i = 1 - (1 - s_i)^p at the midpoints s_i = (i + 1/2)/n_r, so
/// spacing is compressed toward the circle by the exponent p = refinement.
/// Angles are offset by half a cell, theta_j = (j + 1/2) * 2pi/n_theta, so
/// neither the origin nor the real axis carries a node. The boundary ring
/// r = 1 uses the same angles.
///
/// Area weights combine the midpoint rule in s (with symmetric end
/// corrections making it exact for polynomials of degree 5 in s) and the
/// trapezoidal rule in theta.
///
/// The finite-volume geometry used by the Laplacian is separate: cell i spans
/// [face(i), face(i+1)] with face(0) = 0 and faces at midpoints between
/// consecutive nodes, the last one between r_{n_r-1} and the boundary ring.
class DiskGrid {
 public:
  DiskGrid(int n_r, int n_theta, double refinement);

  int n_r() const { return n_r_; }
  int n_theta() const { return n_theta_; }
  double refinement() const { return refinement_; }
  GridSpec spec() const { return {n_r_, n_theta_, refinement_}; }
  std::size_t size() const { return static_cast<std::size_t>(n_r_) * n_theta_; }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * n_theta_ + j; }

  const std::vector<double>& radii() const { return radii_; }
  const std::vector<double>& angles() const { return angles_; }
  const std::vector<double>& boundary_angles() const { return angles_; }
  double dtheta() const { return dtheta_; }

  /// Area weight of any node on ring i.
  double ring_weight(int i) const { return ring_weights_[i]; }
  /// Per-node area weights, laid out like field values.
  std::vector<double> quad_weights() const;

  cx node(int i, int j) const { return std::polar(radii_[i], angles_[j]); }
  cx boundary_node(int j) const { return std::polar(1.0, angles_[j]); }

  /// Finite-volume faces: size n_r + 1.
  const std::vector<double>& faces() const { return faces_; }
  /// Finite-volume cell area for a node on ring i.
  double cell_volume(int i) const { return cell_volumes_[i]; }

  /// Index j' of the node diametrically opposite angle j (n_theta is even).
  int opposite(int j) const { return (j + n_theta_ / 2) % n_theta_; }
  int wrap(int j) const { return ((j % n_theta_) + n_theta_) % n_theta_; }

 private:
  int n_r_;
  int n_theta_;
  double refinement_;
  double dtheta_;
  std::vector<double> radii_;
  std::vector<double> angles_;
  std::vector<double> ring_weights_;
  std::vector<double> faces_;
  std::vector<double> cell_volumes_;
};

using GridPtr = std::shared_ptr<const DiskGrid>;

/// Validates n_r >= 8, n_theta >= 16 and even, refinement >= 1.
GridPtr make_grid(int n_r, int n_theta, double refinement);
inline GridPtr make_grid(const GridSpec& s) { return make_grid(s.n_r, s.n_theta, s.refinement); }

/// Real function on the interior nodes of a grid, with an optional trace on
/// the boundary ring (absent for fields that blow up at the circle).
class ScalarField {
 public:
  ScalarField(GridPtr grid, std::vector<double> values,
              std::optional<std::vector<double>> boundary = std::nullopt);

  const GridPtr& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  const std::optional<std::vector<double>>& boundary() const { return boundary_; }
  double at(int i, int j) const { return values_[grid_->index(i, j)]; }

  /// Interpolated value at an arbitrary point of the closed disk: cubic
  /// Lagrange along the diameter through each nearby angle, then cubic in
  /// angle. Points beyond the last ring need a boundary trace.
  double sample(cx z) const;

  /// Value at t e^{i theta_j}, t in [-1, 1], interpolated along the diameter
  /// through angle j only (no angular interpolation).
  double sample_ray(int j, double t) const;

  /// Mean over ring i.
  double ring_mean(int i) const;

  /// Value at the origin from the diameter interpolant.
  double origin_value() const { return sample(cx(0.0)); }

 private:
  double along_diameter(int j, double t) const;

  GridPtr grid_;
  std::vector<double> values_;
  std::optional<std::vector<double>> boundary_;
};

/// Evaluate a function of z at every interior node.
template <class F>
std::vector<double> tabulate(const DiskGrid& g, F&& f) {
  std::vector<double> out(g.size());
  for (int i = 0; i < g.n_r(); ++i)
    for (int j = 0; j < g.n_theta(); ++j) out[g.index(i, j)] = f(g.node(i, j));
  return out;
}

template <class F>
std::vector<double> tabulate_boundary(const DiskGrid& g, F&& f) {
  std::vector<double> out(g.n_theta());
  for (int j = 0; j < g.n_theta(); ++j) out[j] = f(g.boundary_node(j));
  return out;
}

/// Lagrange weights for the m-th derivative at x0 on arbitrary nodes
/// (Fornberg's algorithm). Returns weights for orders 0..m, each of size x.size().
std::vector<std::vector<double>> fornberg_weights(double x0, const std::vector<double>& x, int m);

}  // namespace gcelab
