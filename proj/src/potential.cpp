#include "gcelab/potential.h"

#include <cmath>
#include <numbers>

#include "gcelab/errors.h"

namespace gcelab {

namespace {
constexpr double kPi = std::numbers::pi;

void require_finite(std::span<const double> v, const char* what) {
  for (double x : v)
    if (!std::isfinite(x)) throw InvalidInput(std::string(what) + ": non-finite sample");
}
}  // namespace

double integrate(const DiskGrid& grid, std::span<const double> values) {
  if (values.size() != grid.size()) throw InvalidInput("integrate: size mismatch");
  double total = 0.0;
  for (int i = 0; i < grid.n_r(); ++i) {
    double ring = 0.0;
    for (int j = 0; j < grid.n_theta(); ++j) ring += values[grid.index(i, j)];
    total += grid.ring_weight(i) * ring;
  }
  return total;
}

double green_kernel(cx z, cx w) {
  return 0.5 * std::log(std::norm(1.0 - z * std::conj(w)) / std::norm(z - w));
}

ScalarField poisson_extend(std::span<const double> h, const GridPtr& grid) {
  const int n = grid->n_theta();
  if (static_cast<int>(h.size()) != n) throw InvalidInput("poisson_extend: need one sample per boundary angle");
  require_finite(h, "poisson_extend");
  const int N = n / 2;
  const auto& th = grid->angles();

  // Fourier coefficients hat h_k, k = 0..N.
  std::vector<cx> hk(N + 1);
  for (int k = 0; k <= N; ++k) {
    cx s = 0.0;
    for (int j = 0; j < n; ++j) s += h[j] * std::polar(1.0, -k * th[j]);
    hk[k] = s / static_cast<double>(n);
  }
  std::vector<cx> phase(static_cast<std::size_t>(n) * (N + 1));
  for (int j = 0; j < n; ++j)
    for (int k = 0; k <= N; ++k) phase[j * (N + 1) + k] = std::polar(1.0, k * th[j]);

  std::vector<double> vals(grid->size());
  std::vector<cx> coeff(N + 1);
  for (int i = 0; i < grid->n_r(); ++i) {
    const double r = grid->radii()[i];
    double rk = 1.0;
    for (int k = 0; k <= N; ++k) {
      const double mult = (k == 0 || k == N) ? 1.0 : 2.0;
      coeff[k] = mult * rk * hk[k];
      rk *= r;
    }
    for (int j = 0; j < n; ++j) {
      double v = 0.0;
      const cx* ph = &phase[j * (N + 1)];
      for (int k = 0; k <= N; ++k) v += (coeff[k] * ph[k]).real();
      vals[grid->index(i, j)] = v;
    }
  }
  return ScalarField(grid, std::move(vals), std::vector<double>(h.begin(), h.end()));
}

std::vector<double> BlaschkeMeasureSpec::nodal_density(const DiskGrid& grid) const {
  std::vector<double> rho(grid.size(), area_density ? 1.0 : 0.0);
  if (!area_density) return rho;
  if (weight) {
    if (weight->grid()->spec() != grid.spec()) throw InvalidInput("measure: weight lives on a different grid");
    rho = weight->values();
  }
  if (modulus)
    for (int i = 0; i < grid.n_r(); ++i)
      for (int j = 0; j < grid.n_theta(); ++j) rho[grid.index(i, j)] *= std::norm((*modulus)(grid.node(i, j)));
  for (double v : rho)
    if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidInput("measure: density must be finite and nonnegative");
  return rho;
}

double BlaschkeMeasureSpec::density_at(cx z) const {
  if (!area_density) return 0.0;
  double v = 1.0;
  if (weight) v *= weight->sample(z);
  if (modulus) v *= std::norm((*modulus)(z));
  return v;
}

namespace {
void check_point_masses(const BlaschkeMeasureSpec& mu) {
  for (const auto& pm : mu.point_masses) {
    if (!(std::abs(pm.location) < 1.0)) throw InvalidInput("measure: point mass outside the open disk");
    if (!(pm.mass > 0.0) || !std::isfinite(pm.mass)) throw InvalidInput("measure: point masses must be positive");
  }
}
}  // namespace

double blaschke_mass(const BlaschkeMeasureSpec& mu, const DiskGrid& grid) {
  check_point_masses(mu);
  auto rho = mu.nodal_density(grid);
  for (int i = 0; i < grid.n_r(); ++i) {
    const double r = grid.radii()[i];
    for (int j = 0; j < grid.n_theta(); ++j) rho[grid.index(i, j)] *= 1.0 - r * r;
  }
  double total = integrate(grid, rho);
  for (const auto& pm : mu.point_masses) total += pm.mass * (1.0 - std::norm(pm.location));
  return total;
}

GreenOperator::GreenOperator(GridPtr grid) : grid_(std::move(grid)) {
  const int nr = grid_->n_r();
  const int n = grid_->n_theta();
  const auto& r = grid_->radii();
  const double dth = grid_->dtheta();
  kernel_.assign(static_cast<std::size_t>(nr) * nr * 2 * n, 0.0);
  std::vector<double> cosines(n);
  for (int m = 0; m < n; ++m) cosines[m] = std::cos(m * dth);
  correction_.assign(nr, 0.0);
  for (int i = 0; i < nr; ++i) {
    double discrete = 0.0;
    for (int i2 = 0; i2 < nr; ++i2) {
      double* row = &kernel_[(static_cast<std::size_t>(i) * nr + i2) * 2 * n];
      const double a = r[i], b = r[i2];
      for (int m = 0; m < n; ++m) {
        double k = 0.0;
        if (!(i == i2 && m == 0)) {
          const double c = 2.0 * a * b * cosines[m];
          k = 0.5 * std::log((1.0 + a * a * b * b - c) / (a * a + b * b - c));
        }
        row[m] = k;
        row[m + n] = k;
        discrete += grid_->ring_weight(i2) * k;
      }
    }
    correction_[i] = 2.0 * kPi * (1.0 - r[i] * r[i]) / 4.0 - discrete;
  }
}

std::vector<double> GreenOperator::apply(std::span<const double> rho) const {
  const int nr = grid_->n_r();
  const int n = grid_->n_theta();
  if (rho.size() != grid_->size()) throw InvalidInput("green: density size mismatch");
  std::vector<double> out(grid_->size(), 0.0);
  std::vector<double> acc(n);
  for (int i = 0; i < nr; ++i) {
    std::fill(acc.begin(), acc.end(), 0.0);
    for (int i2 = 0; i2 < nr; ++i2) {
      const double w = grid_->ring_weight(i2);
      const double* row = &kernel_[(static_cast<std::size_t>(i) * nr + i2) * 2 * n];
      const double* src = &rho[static_cast<std::size_t>(i2) * n];
      for (int j = 0; j < n; ++j) {
        // sum_{j2} K[(j - j2) mod n] rho[j2]; row is doubled so j - j2 + n indexes directly.
        const double* k = row + j + n;
        double s = 0.0;
        for (int j2 = 0; j2 < n; ++j2) s += k[-j2] * src[j2];
        acc[j] += w * s;
      }
    }
    for (int j = 0; j < n; ++j) {
      const std::size_t idx = grid_->index(i, j);
      out[idx] = (acc[j] + correction_[i] * rho[idx]) / (2.0 * kPi);
    }
  }
  return out;
}

ScalarField green_potential(const BlaschkeMeasureSpec& mu, const GreenOperator& op) {
  const auto& grid = op.grid();
  check_point_masses(mu);
  const double mass = blaschke_mass(mu, *grid);
  if (!std::isfinite(mass)) throw InvalidInput("green_potential: divergent Blaschke integral");
  const auto rho = mu.nodal_density(*grid);
  auto vals = mu.area_density ? op.apply(rho) : std::vector<double>(grid->size(), 0.0);
  for (const auto& pm : mu.point_masses)
    for (int i = 0; i < grid->n_r(); ++i)
      for (int j = 0; j < grid->n_theta(); ++j) {
        const cx z = grid->node(i, j);
        if (std::abs(z - pm.location) == 0.0) throw InvalidInput("green_potential: point mass on a grid node");
        vals[grid->index(i, j)] += pm.mass * green_kernel(z, pm.location) / (2.0 * kPi);
      }
  return ScalarField(grid, std::move(vals), std::vector<double>(grid->n_theta(), 0.0));
}

ScalarField green_potential(const BlaschkeMeasureSpec& mu, const GridPtr& grid) {
  if (!mu.area_density) {
    // Point masses only: no kernel table needed.
    check_point_masses(mu);
    std::vector<double> vals(grid->size(), 0.0);
    for (const auto& pm : mu.point_masses)
      for (int i = 0; i < grid->n_r(); ++i)
        for (int j = 0; j < grid->n_theta(); ++j) {
          const cx z = grid->node(i, j);
          if (std::abs(z - pm.location) == 0.0) throw InvalidInput("green_potential: point mass on a grid node");
          vals[grid->index(i, j)] += pm.mass * green_kernel(z, pm.location) / (2.0 * kPi);
        }
    return ScalarField(grid, std::move(vals), std::vector<double>(grid->n_theta(), 0.0));
  }
  return green_potential(mu, GreenOperator(grid));
}

double green_potential_at(const BlaschkeMeasureSpec& mu, const DiskGrid& grid, cx z) {
  check_point_masses(mu);
  if (std::abs(z) >= 1.0) return 0.0;
  double total = 0.0;
  if (mu.area_density) {
    const auto rho = mu.nodal_density(grid);
    const double rz = mu.density_at(z);
    double s = 0.0;
    for (int i = 0; i < grid.n_r(); ++i) {
      double ring = 0.0;
      for (int j = 0; j < grid.n_theta(); ++j) {
        const cx w = grid.node(i, j);
        if (w == z) continue;
        ring += green_kernel(z, w) * (rho[grid.index(i, j)] - rz);
      }
      s += grid.ring_weight(i) * ring;
    }
    total = s + rz * 2.0 * kPi * (1.0 - std::norm(z)) / 4.0;
  }
  for (const auto& pm : mu.point_masses) {
    if (z == pm.location) throw InvalidInput("green_potential_at: evaluation point carries a point mass");
    total += pm.mass * green_kernel(z, pm.location);
  }
  return total / (2.0 * kPi);
}

HoloFn outer_function(std::span<const double> w, const DiskGrid& grid) {
  if (static_cast<int>(w.size()) != grid.n_theta())
    throw InvalidInput("outer_function: need one sample per boundary angle");
  return HoloFn::outer(std::vector<double>(w.begin(), w.end()));
}

double bergman_norm(const HoloFn& f, double p, double alpha, const DiskGrid& grid) {
  if (!(p > 0.0)) throw InvalidInput("bergman_norm: p must be positive");
  if (!(alpha > -1.0)) throw InvalidInput("bergman_norm: alpha must exceed -1");
  std::vector<double> vals(grid.size());
  for (int i = 0; i < grid.n_r(); ++i) {
    const double wgt = std::pow(1.0 - grid.radii()[i], alpha);
    for (int j = 0; j < grid.n_theta(); ++j)
      vals[grid.index(i, j)] = std::pow(std::abs(f(grid.node(i, j))), p) * wgt;
  }
  const double s = integrate(grid, vals);
  if (!std::isfinite(s)) throw InvalidInput("bergman_norm: function not evaluable on the grid");
  return std::pow(s, 1.0 / p);
}

LittlewoodPaley littlewood_paley(const HoloFn& f, const DiskGrid& grid) {
  const int n = grid.n_theta();
  double lhs = 0.0;
  for (int j = 0; j < n; ++j) lhs += std::norm(f(grid.boundary_node(j)));
  lhs /= n;
  std::vector<double> vals(grid.size());
  for (int i = 0; i < grid.n_r(); ++i) {
    const double lg = std::log(1.0 / grid.radii()[i]);
    for (int j = 0; j < n; ++j) vals[grid.index(i, j)] = std::norm(f.derivative(grid.node(i, j))) * lg;
  }
  const double rhs = std::norm(f(cx(0.0))) + kLittlewoodPaleyConstant * integrate(grid, vals);
  if (!std::isfinite(lhs) || !std::isfinite(rhs)) throw InvalidInput("littlewood_paley: function not evaluable");
  return {lhs, rhs};
}

}  // namespace gcelab
