#include "gcelab/blaschke.h"

#include <cmath>
#include <numbers>

#include "gcelab/errors.h"
#include "gcelab/stencil.h"

namespace gcelab {

MobiusDisk::MobiusDisk(cx a_, double phi_) : a(a_), phi(phi_) {
  if (!(std::abs(a) < 1.0)) throw InvalidInput("mobius: |a| must be < 1");
}

cx MobiusDisk::operator()(cx z) const { return std::polar(1.0, phi) * (z - a) / (1.0 - std::conj(a) * z); }

cx MobiusDisk::derivative(cx z) const {
  const cx d = 1.0 - std::conj(a) * z;
  return std::polar(1.0, phi) * (1.0 - std::norm(a)) / (d * d);
}

cx MobiusDisk::second_derivative(cx z) const {
  const cx d = 1.0 - std::conj(a) * z;
  return 2.0 * std::conj(a) * std::polar(1.0, phi) * (1.0 - std::norm(a)) / (d * d * d);
}

MobiusDisk MobiusDisk::inverse() const { return MobiusDisk(-a * std::polar(1.0, phi), -phi); }

MobiusDisk MobiusDisk::after(const MobiusDisk& o) const {
  // Matrices [[e^{i phi}, -e^{i phi} a], [-conj(a), 1]].
  const cx e1 = std::polar(1.0, phi), e2 = std::polar(1.0, o.phi);
  const cx m11 = e1 * e2 + (-e1 * a) * (-std::conj(o.a));
  const cx m12 = e1 * (-e2 * o.a) + (-e1 * a);
  const cx m22 = (-std::conj(a)) * (-e2 * o.a) + 1.0;
  const cx rot = m11 / m22;
  return MobiusDisk(-m12 / m11, std::arg(rot));
}

MobiusDisk mobius_between(cx w1, cx w2) {
  if (!(std::abs(w1) < 1.0) || !(std::abs(w2) < 1.0))
    throw InvalidInput("mobius_between: points must lie in the open disk");
  return MobiusDisk(-w2, 0.0).after(MobiusDisk(w1, 0.0));
}

SelfMap SelfMap::constant(cx c) {
  SelfMap m;
  m.jet_ = [c](cx) { return Jet{c, 0.0, 0.0}; };
  return m;
}

SelfMap SelfMap::blaschke(BlaschkeProduct b) {
  SelfMap m;
  m.jet_ = [b](cx z) {
    const auto j = b.jet(z);
    return Jet{b(z), b.derivative(z), j[2]};
  };
  m.blaschke_ = std::move(b);
  return m;
}

SelfMap SelfMap::holo(HoloFn f) {
  SelfMap m;
  m.jet_ = [f](cx z) {
    const auto j = f.jet(z);
    return Jet{j[0], j[1], j[2]};
  };
  return m;
}

SelfMap SelfMap::from_jet(std::function<Jet(cx)> jet) {
  SelfMap m;
  m.jet_ = std::move(jet);
  return m;
}

BlaschkeProduct mobius_apply(const MobiusDisk& m, const BlaschkeProduct& b) {
  if (b.degree() == 0) {
    // Unimodular constant stays a unimodular constant.
    return BlaschkeProduct({}, std::arg(m(std::polar(1.0, b.rotation))));
  }
  // e^{i theta} A(z) - a A*(z) = 0, with A monic and A* = prod (1 - conj(a_k) z).
  const Poly lhs = b.numerator() - m.a * b.denominator();
  auto zs = roots(lhs);
  for (auto& z : zs)
    if (!(std::abs(z) < 1.0)) throw ConvergenceError("mobius_apply: composed zero left the disk");
  BlaschkeProduct base(zs, 0.0);
  const cx target = m(b(cx(1.0)));
  const cx here = base(cx(1.0));
  return BlaschkeProduct(std::move(zs), std::arg(target / here));
}

SelfMap mobius_apply(const MobiusDisk& m, const SelfMap& f) {
  SelfMap out = SelfMap::from_jet([m, f](cx z) {
    const auto j = f.jet(z);
    const cx d1 = m.derivative(j[0]);
    return SelfMap::Jet{m(j[0]), d1 * j[1], m.second_derivative(j[0]) * j[1] * j[1] + d1 * j[2]};
  });
  if (f.as_blaschke()) return SelfMap::blaschke(mobius_apply(m, *f.as_blaschke()));
  return out;
}

namespace {

MobiusDisk normalizing_map(const SelfMap& f) {
  const cx c0 = f(cx(0.0));
  if (!(std::abs(c0) < 1.0)) throw InvalidInput("normalize: |F(0)| must be < 1");
  const MobiusDisk recenter(c0, 0.0);
  const SelfMap g = mobius_apply(recenter, f);

  // Leading Taylor coefficient of g at 0: exact from the 2-jet when possible,
  // otherwise from a Cauchy integral on |z| = 1/2.
  const auto j = g.jet(cx(0.0));
  std::vector<cx> coeffs{j[0], j[1], 0.5 * j[2]};
  const int m = 128;
  const double rad = 0.5;
  std::vector<cx> samples(m);
  for (int k = 0; k < m; ++k) samples[k] = g(std::polar(rad, 2.0 * std::numbers::pi * k / m));
  for (int n = 3; n < 24; ++n) {
    cx s = 0.0;
    for (int k = 0; k < m; ++k) s += samples[k] * std::polar(1.0, -2.0 * std::numbers::pi * n * k / m);
    coeffs.push_back(s / (static_cast<double>(m) * std::pow(rad, n)));
  }
  double scale = 0.0;
  for (std::size_t n = 1; n < coeffs.size(); ++n) scale = std::max(scale, std::abs(coeffs[n]));
  if (scale < 1e-12) throw InvalidInput("normalize: map is constant");
  for (std::size_t n = 1; n < coeffs.size(); ++n)
    if (std::abs(coeffs[n]) > 1e-10 * std::max(scale, 1.0)) return MobiusDisk(c0, -std::arg(coeffs[n]));
  throw InvalidInput("normalize: map is constant");
}

}  // namespace

std::pair<SelfMap, MobiusDisk> normalize(const SelfMap& f) {
  const MobiusDisk m = normalizing_map(f);
  return {mobius_apply(m, f), m};
}

std::pair<BlaschkeProduct, MobiusDisk> normalize(const BlaschkeProduct& b) {
  if (b.degree() == 0) throw InvalidInput("normalize: map is constant");
  const MobiusDisk m = normalizing_map(SelfMap::blaschke(b));
  return {mobius_apply(m, b), m};
}

PullbackMetric pullback(const SelfMap& f, const std::optional<HoloFn>& h, const GridPtr& grid) {
  std::vector<double> u(grid->size());
  for (int i = 0; i < grid->n_r(); ++i)
    for (int j = 0; j < grid->n_theta(); ++j) {
      const cx z = grid->node(i, j);
      const auto jt = f.jet(z);
      const double mod2 = std::norm(jt[0]);
      if (!(mod2 < 1.0)) throw InvalidInput("pullback: F is not a strict self-map at an interior node");
      double v = std::log(2.0 * std::abs(jt[1])) - std::log1p(-mod2);
      if (h) v -= std::log(std::abs((*h)(z)));
      if (!std::isfinite(v)) throw InvalidInput("pullback: density vanishes or blows up at a grid node");
      u[grid->index(i, j)] = v;
    }
  return PullbackMetric{f, ScalarField(grid, std::move(u)), h};
}

std::vector<double> discrete_curvature(const PullbackMetric& m) {
  const auto& grid = m.u_field.grid();
  std::vector<double> w = m.u_field.values();
  if (m.weight)
    for (int i = 0; i < grid->n_r(); ++i)
      for (int j = 0; j < grid->n_theta(); ++j)
        w[grid->index(i, j)] += std::log(std::abs((*m.weight)(grid->node(i, j))));
  const auto lap = smooth_laplacian(*grid, w, std::nullopt);
  std::vector<double> k(grid->size());
  for (std::size_t idx = 0; idx < k.size(); ++idx) k[idx] = -lap[idx] / std::exp(2.0 * w[idx]);
  return k;
}

}  // namespace gcelab
