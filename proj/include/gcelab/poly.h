#pragma once

#include <complex>
#include <vector>

namespace gcelab {

using cx = std::complex<double>;

/// Dense complex polynomial, coefficients in ascending order (c[k] multiplies z^k).
struct Poly {
  std::vector<cx> c;

  Poly() = default;
  explicit Poly(std::vector<cx> coeffs) : c(std::move(coeffs)) {}

  int degree() const { return static_cast<int>(c.size()) - 1; }
  cx operator()(cx z) const;
  Poly derivative() const;
  /// Drops leading coefficients below rel_tol * max|c_k|.
  Poly trimmed(double rel_tol = 1e-13) const;

  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(cx s, const Poly& a);
};

/// Monic polynomial with the given roots.
Poly from_roots(const std::vector<cx>& roots);

/// Remainder of p modulo a monic divisor.
Poly remainder_monic(const Poly& p, const Poly& monic_divisor);

/// All roots via companion-matrix eigenvalues, each polished by one Newton step
/// (kept only when it lowers |p|).
std::vector<cx> roots(const Poly& p);

/// Value and the first `order` derivatives at z.
std::vector<cx> jet(const Poly& p, cx z, int order);

/// Sort lexicographically by (real, imag) and snap clustered roots (within
/// cluster_radius of each other) to their common mean.
void sort_and_cluster(std::vector<cx>& pts, double cluster_radius = 1e-7);

}  // namespace gcelab
