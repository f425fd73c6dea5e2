#include <cmath>
#include <limits>

#include "gcelab/canonical.h"
#include "gcelab/errors.h"
#include "gcelab/stencil.h"

namespace gcelab {

double LiouvilleMap::hyperbolic_density(int i, int j) const {
  return std::abs(derivative_at(i, j)) / (1.0 - std::norm(at(i, j)));
}

namespace {

// Complex field sampled through two real ScalarFields.
struct ComplexSampler {
  ScalarField re, im;
  ComplexSampler(const GridPtr& g, const std::vector<cx>& v) : re(split(g, v, true)), im(split(g, v, false)) {}
  static ScalarField split(const GridPtr& g, const std::vector<cx>& v, bool real) {
    std::vector<double> out(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) out[k] = real ? v[k].real() : v[k].imag();
    return ScalarField(g, std::move(out));
  }
  cx ray(int j, double t) const { return {re.sample_ray(j, t), im.sample_ray(j, t)}; }
  cx at(cx z) const { return {re.sample(z), im.sample(z)}; }
};

struct State {
  cx I, g;
};

State operator+(State a, State b) { return {a.I + b.I, a.g + b.g}; }
State operator*(double s, State a) { return {s * a.I, s * a.g}; }

// d/ds of (I, g) along a path z(s) with z'(s) = dz, given u_z and H at z.
State rhs(const State& y, cx dz, cx uz, cx Hz) {
  const cx ip = y.g * Hz;  // I'
  const double denom = 1.0 - std::norm(y.I);
  return {dz * ip, dz * y.g * (2.0 * uz - 2.0 * std::conj(y.I) * ip / denom)};
}

template <class F>
State rk4(const State& y, double h, F&& f) {
  // f(offset, state) -> derivative
  const State k1 = f(0.0, y);
  const State k2 = f(0.5 * h, y + (0.5 * h) * k1);
  const State k3 = f(0.5 * h, y + (0.5 * h) * k2);
  const State k4 = f(h, y + h * k3);
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

cx leading_coefficient(const HoloFn& H) {
  const auto c = H.taylor(16);
  double scale = 0.0;
  for (const auto& v : c) scale = std::max(scale, std::abs(v));
  for (const auto& v : c)
    if (std::abs(v) > 1e-10 * scale) return v;
  throw InvalidInput("liouville_extract: H vanishes to high order at 0");
}

}  // namespace

LiouvilleMap liouville_extract(const ScalarField& u, const HoloFn& H, const LiouvilleOptions& opts) {
  const GridPtr& grid = u.grid();
  const DiskGrid& g = *grid;
  if (!(opts.rho > 0.0) || !(opts.rho < g.radii().back()))
    throw InvalidInput("liouville_extract: compact radius must lie inside the last ring");
  LiouvilleMap out;
  out.grid = grid;
  out.rho = opts.rho;
  while (out.rings < g.n_r() && g.radii()[out.rings] <= opts.rho) ++out.rings;
  if (out.rings == 0) throw InvalidInput("liouville_extract: no ring inside the compact");

  // u_z, u_zz and u_{z zbar} on the whole grid.
  std::vector<cx> uc(u.values().begin(), u.values().end());
  std::optional<std::vector<cx>> trace;
  if (u.boundary()) trace = std::vector<cx>(u.boundary()->begin(), u.boundary()->end());
  const auto uz = d_z(g, uc, trace);
  const auto uzz = d_z(g, uz);
  const auto uzzb = d_zbar(g, uz);
  const ComplexSampler uz_s(grid, uz);

  // Q and the holomorphy defect.
  const std::size_t nfill = static_cast<std::size_t>(out.rings) * g.n_theta();
  std::vector<cx> q0(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) q0[k] = uzz[k] - uz[k] * uz[k];
  const auto dq0 = d_zbar(g, q0);
  const auto zeros = H.zeros();
  out.Q.resize(nfill);
  for (int i = 0; i < out.rings; ++i)
    for (int j = 0; j < g.n_theta(); ++j) {
      const std::size_t k = g.index(i, j);
      const cx z = g.node(i, j);
      const auto jt = H.jet(z);
      const cx lh1 = jt[1] / jt[0];                              // (log H)'
      const cx lh2 = (jt[2] * jt[0] - jt[1] * jt[1]) / (jt[0] * jt[0]);  // (log H)''
      const cx wz = uz[k] + 0.5 * lh1;
      out.Q[k] = uzz[k] + 0.5 * lh2 - wz * wz;
      bool near = false;
      for (cx a : zeros) near = near || std::abs(z - a) < opts.zero_exclusion;
      if (near) continue;
      out.cr_residual = std::max(out.cr_residual, std::abs(dq0[k] - lh1 * uzzb[k]));
    }
  if (!(out.cr_residual <= opts.cr_tol))
    throw InvalidInput("liouville_extract: Q is not holomorphic (cr residual " + std::to_string(out.cr_residual) +
                       "); u does not solve the equation");

  // Ray integration.
  const cx lead = leading_coefficient(H);
  const State start{0.0, std::polar(0.5 * std::exp(u.origin_value()), -std::arg(lead))};
  out.values.assign(nfill, 0.0);
  out.derivative.assign(nfill, 0.0);
  const auto& r = g.radii();
  for (int j = 0; j < g.n_theta(); ++j) {
    const cx e = std::polar(1.0, g.angles()[j]);
    State y = start;
    double t = 0.0;
    for (int i = 0; i < out.rings; ++i) {
      const double span = r[i] - t;
      const int sub = std::max(1, static_cast<int>(std::ceil(span / 0.01)));
      const double h = span / sub;
      for (int s = 0; s < sub; ++s) {
        const double t0 = t;
        y = rk4(y, h, [&](double off, const State& yy) {
          const double tt = t0 + off;
          return rhs(yy, e, uz_s.ray(j, tt), H(tt * e));
        });
        t += h;
      }
      t = r[i];
      if (!(std::norm(y.I) < 1.0))
        throw InconsistencyError("liouville_extract: |I| >= 1 inside the compact");
      const std::size_t k = g.index(i, j);
      out.values[k] = y.I;
      out.derivative[k] = y.g * H(g.node(i, j));
    }
  }

  // Validation against u, ray-to-ray consistency and the inner profile.
  for (int i = 0; i < out.rings; ++i) {
    double mn = std::numeric_limits<double>::infinity(), mean = 0.0;
    for (int j = 0; j < g.n_theta(); ++j) {
      const std::size_t k = g.index(i, j);
      const cx z = g.node(i, j);
      const cx gk = out.derivative[k] / H(z);
      const double model = std::log(2.0 * std::abs(gk) / (1.0 - std::norm(out.values[k])));
      out.validation = std::max(out.validation, std::abs(model - u.values()[k]));
      const double m = std::abs(out.values[k]);
      mn = std::min(mn, m);
      mean += m / g.n_theta();

      // One RK4 step in angle to the neighboring ray.
      const double dth = g.dtheta();
      const double th0 = g.angles()[j];
      const double rr = r[i];
      const State next = rk4(State{out.values[k], gk}, dth, [&](double off, const State& yy) {
        const cx zz = std::polar(rr, th0 + off);
        return rhs(yy, cx(0.0, 1.0) * zz, uz_s.at(zz), H(zz));
      });
      const std::size_t kn = g.index(i, g.wrap(j + 1));
      out.ray_consistency = std::max(out.ray_consistency, std::abs(next.I - out.values[kn]));
    }
    out.inner_profile.emplace_back(mn, mean);
  }
  return out;
}

}  // namespace gcelab
