#pragma once

#include <cmath>
#include <complex>

namespace oracles {

using cx = std::complex<double>;

// Degree 2 with F(0) = 0: F = z (z - a) / (1 - conj(a) z). The numerator of F'
// is -conj(a) z^2 + 2 z - a; its root in the disk is the critical point.
inline cx d2_critical(cx a) { return a / (1.0 + std::sqrt(1.0 - std::norm(a))); }

// Dense grid search over the zero a, then real 2x2 Newton with central differences.
inline cx brute_force_zero(cx target) {
  cx best = 0;
  double best_err = std::abs(d2_critical(0) - target);
  const int n = 400;
  for (int i = -n; i <= n; ++i)
    for (int j = -n; j <= n; ++j) {
      const cx a(0.995 * i / n, 0.995 * j / n);
      if (std::abs(a) >= 0.995) continue;
      const double e = std::abs(d2_critical(a) - target);
      if (e < best_err) best_err = e, best = a;
    }
  cx a = best;
  for (int it = 0; it < 50; ++it) {
    const cx r = d2_critical(a) - target;
    if (std::abs(r) < 1e-15) break;
    const double h = 1e-7;
    const cx dx = (d2_critical(a + h) - d2_critical(a - h)) / (2 * h);
    const cx dy = (d2_critical(a + cx(0, h)) - d2_critical(a - cx(0, h))) / (2 * h);
    const double det = dx.real() * dy.imag() - dy.real() * dx.imag();
    const double sx = (dy.imag() * r.real() - dy.real() * r.imag()) / det;
    const double sy = (-dx.imag() * r.real() + dx.real() * r.imag()) / det;
    a -= cx(sx, sy);
  }
  return a;
}

}  // namespace oracles
