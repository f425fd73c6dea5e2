#include "gcelab/stencil.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gcelab/errors.h"

namespace gcelab {

FluxLaplacian::FluxLaplacian(const DiskGrid& g) {
  const int nr = g.n_r(), n = g.n_theta();
  const auto& r = g.radii();
  const auto& f = g.faces();
  const double dth = g.dtheta();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(g.size() * 5);
  volume.resize(g.size());
  for (int i = 0; i < nr; ++i) {
    const double outer_r = (i + 1 < nr) ? r[i + 1] : 1.0;
    const double c_out = f[i + 1] * dth / (outer_r - r[i]);
    const double c_in = (i > 0) ? f[i] * dth / (r[i] - r[i - 1]) : 0.0;
    const double c_ang = (f[i + 1] - f[i]) / (r[i] * dth);
    for (int j = 0; j < n; ++j) {
      const auto k = static_cast<int>(g.index(i, j));
      volume[k] = g.cell_volume(i);
      trips.emplace_back(k, k, -(c_out + c_in + 2.0 * c_ang));
      if (i + 1 < nr) trips.emplace_back(k, static_cast<int>(g.index(i + 1, j)), c_out);
      if (i > 0) trips.emplace_back(k, static_cast<int>(g.index(i - 1, j)), c_in);
      trips.emplace_back(k, static_cast<int>(g.index(i, g.wrap(j + 1))), c_ang);
      trips.emplace_back(k, static_cast<int>(g.index(i, g.wrap(j - 1))), c_ang);
    }
  }
  A.resize(static_cast<int>(g.size()), static_cast<int>(g.size()));
  A.setFromTriplets(trips.begin(), trips.end());
}

std::vector<double> FluxLaplacian::boundary_term(const DiskGrid& g, std::span<const double> trace) const {
  if (static_cast<int>(trace.size()) != g.n_theta()) throw InvalidInput("laplacian: boundary trace size mismatch");
  std::vector<double> b(g.size(), 0.0);
  const int i = g.n_r() - 1;
  const double c_out = g.faces()[i + 1] * g.dtheta() / (1.0 - g.radii()[i]);
  for (int j = 0; j < g.n_theta(); ++j) b[g.index(i, j)] = c_out * trace[j];
  return b;
}

std::vector<double> laplacian(const DiskGrid& g, std::span<const double> u,
                              const std::optional<std::vector<double>>& trace) {
  if (u.size() != g.size()) throw InvalidInput("laplacian: size mismatch");
  const FluxLaplacian L(g);
  Eigen::Map<const Eigen::VectorXd> uv(u.data(), static_cast<Eigen::Index>(u.size()));
  Eigen::VectorXd flux = L.A * uv;
  std::vector<double> out(g.size());
  if (trace) {
    const auto b = L.boundary_term(g, *trace);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = (flux[k] + b[k]) / L.volume[k];
  } else {
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = flux[k] / L.volume[k];
    for (int j = 0; j < g.n_theta(); ++j)
      out[g.index(g.n_r() - 1, j)] = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

namespace {

constexpr int kRadialWidth = 9;

template <class T>
struct Derivs {
  std::vector<T> dr, drr, dth, dthth;
};

template <class T>
Derivs<T> derivs_impl(const DiskGrid& g, std::span<const T> f, const std::optional<std::vector<T>>& trace) {
  if (f.size() != g.size()) throw InvalidInput("gradient: size mismatch");
  const int nr = g.n_r(), n = g.n_theta();
  const auto& r = g.radii();
  Derivs<T> out{std::vector<T>(g.size()), std::vector<T>(g.size()), std::vector<T>(g.size()),
                std::vector<T>(g.size())};

  // Positions along a diameter: -r_{nr-1} .. -r_0, r_0 .. r_{nr-1} [, 1].
  const int total = 2 * nr + (trace ? 1 : 0);
  std::vector<double> pos(total);
  for (int k = 0; k < nr; ++k) {
    pos[k] = -r[nr - 1 - k];
    pos[nr + k] = r[k];
  }
  if (trace) pos[2 * nr] = 1.0;

  // Radial stencils depend only on the ring; compute once.
  const int half = kRadialWidth / 2;
  std::vector<int> lo(nr);
  std::vector<std::vector<std::vector<double>>> w(nr);
  for (int i = 0; i < nr; ++i) {
    const int l = std::clamp(nr + i - half, 0, total - kRadialWidth);
    lo[i] = l;
    std::vector<double> xs(pos.begin() + l, pos.begin() + l + kRadialWidth);
    w[i] = fornberg_weights(r[i], xs, 2);
  }
  for (int j = 0; j < n; ++j) {
    const int jo = g.opposite(j);
    auto val = [&](int k) -> T {
      if (k < nr) return f[g.index(nr - 1 - k, jo)];
      if (k < 2 * nr) return f[g.index(k - nr, j)];
      return (*trace)[j];
    };
    for (int i = 0; i < nr; ++i) {
      T s1{}, s2{};
      for (int q = 0; q < kRadialWidth; ++q) {
        const T v = val(lo[i] + q);
        s1 += w[i][1][q] * v;
        s2 += w[i][2][q] * v;
      }
      out.dr[g.index(i, j)] = s1;
      out.drr[g.index(i, j)] = s2;
    }
  }

  // Periodic stencils in angle, same width.
  std::vector<double> offs(kRadialWidth);
  for (int q = 0; q < kRadialWidth; ++q) offs[q] = (q - half) * g.dtheta();
  const auto wa = fornberg_weights(0.0, offs, 2);
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < n; ++j) {
      T s1{}, s2{};
      for (int q = 0; q < kRadialWidth; ++q) {
        const T v = f[g.index(i, g.wrap(j + q - half))];
        s1 += wa[1][q] * v;
        s2 += wa[2][q] * v;
      }
      out.dth[g.index(i, j)] = s1;
      out.dthth[g.index(i, j)] = s2;
    }
  return out;
}

}  // namespace

std::vector<double> smooth_laplacian(const DiskGrid& g, std::span<const double> u,
                                     const std::optional<std::vector<double>>& trace) {
  const auto d = derivs_impl<double>(g, u, trace);
  std::vector<double> out(g.size());
  for (int i = 0; i < g.n_r(); ++i) {
    const double r = g.radii()[i];
    for (int j = 0; j < g.n_theta(); ++j) {
      const std::size_t k = g.index(i, j);
      out[k] = d.drr[k] + d.dr[k] / r + d.dthth[k] / (r * r);
    }
  }
  return out;
}

PolarGradient polar_gradient(const DiskGrid& g, std::span<const double> f,
                             const std::optional<std::vector<double>>& trace) {
  auto gr = derivs_impl<double>(g, f, trace);
  return {std::move(gr.dr), std::move(gr.dth)};
}

std::vector<cx> d_z(const DiskGrid& g, std::span<const cx> f, const std::optional<std::vector<cx>>& trace) {
  const auto gr = derivs_impl<cx>(g, f, trace);
  std::vector<cx> out(g.size());
  for (int i = 0; i < g.n_r(); ++i)
    for (int j = 0; j < g.n_theta(); ++j) {
      const std::size_t k = g.index(i, j);
      const double r = g.radii()[i];
      // d/dz = (1/2) e^{-i theta} (d/dr - (i/r) d/dtheta)
      out[k] = 0.5 * std::polar(1.0, -g.angles()[j]) * (gr.dr[k] - cx(0.0, 1.0) * gr.dth[k] / r);
    }
  return out;
}

std::vector<cx> d_zbar(const DiskGrid& g, std::span<const cx> f, const std::optional<std::vector<cx>>& trace) {
  const auto gr = derivs_impl<cx>(g, f, trace);
  std::vector<cx> out(g.size());
  for (int i = 0; i < g.n_r(); ++i)
    for (int j = 0; j < g.n_theta(); ++j) {
      const std::size_t k = g.index(i, j);
      const double r = g.radii()[i];
      out[k] = 0.5 * std::polar(1.0, g.angles()[j]) * (gr.dr[k] + cx(0.0, 1.0) * gr.dth[k] / r);
    }
  return out;
}

}  // namespace gcelab
