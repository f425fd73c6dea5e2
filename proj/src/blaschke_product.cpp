#include "gcelab/blaschke_product.h"

#include <cmath>
#include <numbers>
#include <sstream>

#include "gcelab/errors.h"

namespace gcelab {

BlaschkeProduct::BlaschkeProduct(std::vector<cx> z, double rot) : zeros(std::move(z)) {
  for (const auto& a : zeros)
    if (!(std::abs(a) < 1.0)) throw InvalidInput("blaschke: zeros must lie in the open disk");
  if (!std::isfinite(rot)) throw InvalidInput("blaschke: non-finite rotation");
  const double two_pi = 2.0 * std::numbers::pi;
  rotation = std::fmod(rot, two_pi);
  if (rotation < 0) rotation += two_pi;
}

cx BlaschkeProduct::operator()(cx z) const {
  cx v = std::polar(1.0, rotation);
  for (const auto& a : zeros) v *= (z - a) / (1.0 - std::conj(a) * z);
  return v;
}

cx BlaschkeProduct::derivative(cx z) const {
  const std::size_t d = zeros.size();
  if (d == 0) return 0.0;
  std::vector<cx> f(d), df(d);
  for (std::size_t k = 0; k < d; ++k) {
    const cx a = zeros[k];
    const cx den = 1.0 - std::conj(a) * z;
    f[k] = (z - a) / den;
    df[k] = (1.0 - std::norm(a)) / (den * den);
  }
  cx sum = 0.0;
  for (std::size_t k = 0; k < d; ++k) {
    cx term = df[k];
    for (std::size_t l = 0; l < d; ++l)
      if (l != k) term *= f[l];
    sum += term;
  }
  return std::polar(1.0, rotation) * sum;
}

std::array<cx, 4> BlaschkeProduct::jet(cx z) const {
  const auto n = gcelab::jet(numerator(), z, 3);
  const auto d = gcelab::jet(denominator(), z, 3);
  // Leibniz on D f = N.
  std::array<cx, 4> f{};
  static constexpr double binom[4][4] = {{1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};
  for (int k = 0; k < 4; ++k) {
    cx acc = n[k];
    for (int m = 1; m <= k; ++m) acc -= binom[k][m] * d[m] * f[k - m];
    f[k] = acc / d[0];
  }
  f[0] = (*this)(z);
  return f;
}

Poly BlaschkeProduct::numerator() const {
  return std::polar(1.0, rotation) * from_roots(zeros);
}

Poly BlaschkeProduct::denominator() const {
  Poly p({cx(1.0)});
  for (const auto& a : zeros) p = p * Poly({cx(1.0), -std::conj(a)});
  return p;
}

Poly BlaschkeProduct::derivative_numerator() const {
  const std::size_t d = zeros.size();
  Poly sum({cx(0.0)});
  for (std::size_t k = 0; k < d; ++k) {
    Poly term({cx(1.0 - std::norm(zeros[k]))});
    for (std::size_t l = 0; l < d; ++l) {
      if (l == k) continue;
      term = term * Poly({-zeros[l], cx(1.0)}) * Poly({cx(1.0), -std::conj(zeros[l])});
    }
    sum = sum + term;
  }
  return sum;
}

std::vector<CriticalPoint> critical_point_report(const BlaschkeProduct& b) {
  const int d = b.degree();
  if (d < 1) throw InvalidInput("critical_points: degree must be >= 1");
  if (d == 1) return {};
  const auto all = roots(b.derivative_numerator());
  std::vector<cx> inside;
  for (const auto& z : all)
    if (std::abs(z) < 1.0 - 1e-10) inside.push_back(z);
  if (static_cast<int>(inside.size()) != d - 1) {
    std::ostringstream msg;
    msg << "critical_points: expected " << d - 1 << " interior roots, found " << inside.size()
        << "; roots/residuals:";
    for (const auto& z : all) msg << " (" << z << ", " << std::abs(b.derivative(z)) << ")";
    throw ConvergenceError(msg.str());
  }
  sort_and_cluster(inside);
  std::vector<CriticalPoint> out;
  for (const auto& z : inside) out.push_back({z, std::abs(b.derivative(z))});
  return out;
}

std::vector<cx> critical_points(const BlaschkeProduct& b) {
  std::vector<cx> out;
  for (const auto& c : critical_point_report(b)) out.push_back(c.point);
  return out;
}

}  // namespace gcelab
