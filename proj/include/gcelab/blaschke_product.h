#pragma once

#include <array>
#include <complex>
#include <vector>

#include "gcelab/poly.h"

namespace gcelab {

/// Finite Blaschke product F(z) = e^{i rotation} prod (z - a_k)/(1 - conj(a_k) z).
struct BlaschkeProduct {
  std::vector<cx> zeros;
  double rotation = 0.0;

  BlaschkeProduct() = default;
  /// Validates |a_k| < 1 and wraps rotation into [0, 2pi).
  BlaschkeProduct(std::vector<cx> zeros, double rotation);

  int degree() const { return static_cast<int>(zeros.size()); }

  /// Product form, factor by factor.
  cx operator()(cx z) const;
  /// F'(z) = e^{i rotation} sum_k b_k'(z) prod_{l != k} b_l(z); no division by
  /// factor values, so zeros of F need no special casing.
  cx derivative(cx z) const;
  /// F and its first three derivatives, from the rational form A / A*.
  std::array<cx, 4> jet(cx z) const;

  /// e^{i rotation} prod (z - a_k).
  Poly numerator() const;
  /// prod (1 - conj(a_k) z).
  Poly denominator() const;
  /// N with F' = e^{i rotation} N / denominator()^2, degree 2d - 2.
  Poly derivative_numerator() const;

  friend bool operator==(const BlaschkeProduct&, const BlaschkeProduct&) = default;
};

struct CriticalPoint {
  cx point;
  double residual;  // |F'(point)|
};

/// The d - 1 critical points of F inside the disk, sorted lexicographically by
/// (real, imag) with clustered roots snapped together. Throws
/// ConvergenceError (with residuals in the message) when the root finder does
/// not return exactly d - 1 interior roots.
std::vector<cx> critical_points(const BlaschkeProduct& b);
std::vector<CriticalPoint> critical_point_report(const BlaschkeProduct& b);

}  // namespace gcelab
