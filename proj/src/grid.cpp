#include "gcelab/grid.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "gcelab/errors.h"

namespace gcelab {

namespace {

// Symmetric end corrections delta_q (q < K) to the midpoint rule on n nodes so
// that even moments of (s - 1/2) up to degree 2K - 2 integrate exactly (odd
// moments are exact by symmetry).
std::vector<double> end_corrections(int n, int K) {
  const double h = 1.0 / n;
  Eigen::MatrixXd A(K, K);
  Eigen::VectorXd b(K);
  for (int m = 0; m < K; ++m) {
    const int deg = 2 * m;
    const double exact = 2.0 * std::pow(0.5, deg + 1) / (deg + 1);
    double base = 0.0;
    for (int i = 0; i < n; ++i) base += h * std::pow((i + 0.5) * h - 0.5, deg);
    b(m) = exact - base;
    for (int q = 0; q < K; ++q) A(m, q) = 2.0 * h * std::pow((q + 0.5) * h - 0.5, deg);
  }
  Eigen::VectorXd d = A.fullPivLu().solve(b);
  return {d.data(), d.data() + K};
}

}  // namespace

DiskGrid::DiskGrid(int n_r, int n_theta, double refinement)
    : n_r_(n_r), n_theta_(n_theta), refinement_(refinement) {
  if (n_r < 8) throw InvalidInput("grid: n_r must be >= 8, got " + std::to_string(n_r));
  if (n_theta < 16 || n_theta % 2 != 0)
    throw InvalidInput("grid: n_theta must be even and >= 16, got " + std::to_string(n_theta));
  if (!(refinement >= 1.0) || !std::isfinite(refinement))
    throw InvalidInput("grid: refinement must be >= 1");

  const double pi = std::numbers::pi;
  dtheta_ = 2.0 * pi / n_theta;
  angles_.resize(n_theta);
  for (int j = 0; j < n_theta; ++j) angles_[j] = (j + 0.5) * dtheta_;

  const double h = 1.0 / n_r;
  radii_.resize(n_r);
  for (int i = 0; i < n_r; ++i) {
    const double s = (i + 0.5) * h;
    radii_[i] = 1.0 - std::pow(1.0 - s, refinement);
  }

  // Highest-order correction that keeps every weight positive.
  std::vector<double> delta(n_r, 0.0);
  for (int K = std::min(3, n_r / 2); K >= 1; --K) {
    const auto d = end_corrections(n_r, K);
    bool ok = true;
    for (double v : d) ok = ok && (1.0 + v > 0.0);
    if (!ok) continue;
    std::fill(delta.begin(), delta.end(), 0.0);
    for (int q = 0; q < K; ++q) {
      delta[q] += d[q];
      delta[n_r - 1 - q] += d[q];
    }
    break;
  }
  ring_weights_.resize(n_r);
  for (int i = 0; i < n_r; ++i) {
    const double s = (i + 0.5) * h;
    const double drds = refinement * std::pow(1.0 - s, refinement - 1.0);
    ring_weights_[i] = h * (1.0 + delta[i]) * radii_[i] * drds * dtheta_;
  }

  faces_.resize(n_r + 1);
  faces_[0] = 0.0;
  for (int i = 0; i + 1 < n_r; ++i) faces_[i + 1] = 0.5 * (radii_[i] + radii_[i + 1]);
  faces_[n_r] = 0.5 * (radii_[n_r - 1] + 1.0);
  cell_volumes_.resize(n_r);
  for (int i = 0; i < n_r; ++i)
    cell_volumes_[i] = 0.5 * dtheta_ * (faces_[i + 1] * faces_[i + 1] - faces_[i] * faces_[i]);
}

std::vector<double> DiskGrid::quad_weights() const {
  std::vector<double> w(size());
  for (int i = 0; i < n_r_; ++i)
    for (int j = 0; j < n_theta_; ++j) w[index(i, j)] = ring_weights_[i];
  return w;
}

GridPtr make_grid(int n_r, int n_theta, double refinement) {
  return std::make_shared<const DiskGrid>(n_r, n_theta, refinement);
}

std::vector<std::vector<double>> fornberg_weights(double x0, const std::vector<double>& x, int m) {
  const int n = static_cast<int>(x.size());
  std::vector<std::vector<double>> c(m + 1, std::vector<double>(n, 0.0));
  double c1 = 1.0;
  double c4 = x[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (int k = mn; k >= 1; --k) c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c;
}

ScalarField::ScalarField(GridPtr grid, std::vector<double> values,
                         std::optional<std::vector<double>> boundary)
    : grid_(std::move(grid)), values_(std::move(values)), boundary_(std::move(boundary)) {
  if (!grid_) throw InvalidInput("field: null grid");
  if (values_.size() != grid_->size()) throw InvalidInput("field: value count does not match grid");
  for (double v : values_)
    if (!std::isfinite(v)) throw InvalidInput("field: non-finite value");
  if (boundary_) {
    if (boundary_->size() != static_cast<std::size_t>(grid_->n_theta()))
      throw InvalidInput("field: boundary trace size does not match grid");
    for (double v : *boundary_)
      if (!std::isfinite(v)) throw InvalidInput("field: non-finite boundary value");
  }
}

double ScalarField::ring_mean(int i) const {
  double s = 0.0;
  for (int j = 0; j < grid_->n_theta(); ++j) s += at(i, j);
  return s / grid_->n_theta();
}

double ScalarField::sample_ray(int j, double t) const {
  if (t < -1.0 - 1e-12 || t > 1.0 + 1e-12) throw InvalidInput("field: ray parameter outside [-1, 1]");
  if (!boundary_ && std::abs(t) > grid_->radii().back())
    throw InvalidInput("field: sample beyond the last ring needs a boundary trace");
  return along_diameter(j, t);
}

double ScalarField::along_diameter(int j, double t) const {
  const auto& r = grid_->radii();
  const int n = grid_->n_r();
  const int jo = grid_->opposite(j);
  // Line nodes ordered by t: -r_{n-1} .. -r_0, r_0 .. r_{n-1} [, 1].
  const int total = 2 * n + (boundary_ ? 1 : 0);
  auto pos = [&](int k) {
    if (k < n) return -r[n - 1 - k];
    if (k < 2 * n) return r[k - n];
    return 1.0;
  };
  auto val = [&](int k) {
    if (k < n) return at(n - 1 - k, jo);
    if (k < 2 * n) return at(k - n, j);
    return (*boundary_)[j];
  };
  // First node with position > t.
  int hi;
  if (t < r[0])
    hi = n - static_cast<int>(std::lower_bound(r.begin(), r.end(), -t) - r.begin());
  else
    hi = n + static_cast<int>(std::upper_bound(r.begin(), r.end(), t) - r.begin());
  if (hi == 2 * n && boundary_ && t >= 1.0) hi = total;
  int lo = std::clamp(hi - 2, 0, total - 4);
  std::vector<double> xs(4);
  for (int k = 0; k < 4; ++k) xs[k] = pos(lo + k);
  const auto w = fornberg_weights(t, xs, 0);
  double out = 0.0;
  for (int k = 0; k < 4; ++k) out += w[0][k] * val(lo + k);
  return out;
}

double ScalarField::sample(cx z) const {
  const double r = std::abs(z);
  if (r > 1.0 + 1e-12) throw InvalidInput("field: sample point outside the closed disk");
  if (!boundary_ && r > grid_->radii().back())
    throw InvalidInput("field: sample beyond the last ring needs a boundary trace");
  const double dth = grid_->dtheta();
  double th = std::arg(z);
  if (th < 0) th += 2.0 * std::numbers::pi;
  const double u = th / dth - 0.5;  // fractional node index
  const int j0 = static_cast<int>(std::floor(u));
  std::vector<double> xs{-1.0, 0.0, 1.0, 2.0};
  const auto w = fornberg_weights(u - j0, xs, 0);
  double out = 0.0;
  for (int k = 0; k < 4; ++k) out += w[0][k] * along_diameter(grid_->wrap(j0 - 1 + k), r);
  return out;
}

}  // namespace gcelab
