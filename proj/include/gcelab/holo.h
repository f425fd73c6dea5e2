#pragma once

#include <array>
#include <complex>
#include <memory>
#include <vector>

#include "gcelab/blaschke_product.h"
#include "gcelab/poly.h"

namespace gcelab {

/// Exactly evaluable holomorphic function on the closed disk. Plays the role
/// of the weight H, of derivatives I', and of outer factors.
///
/// Immutable; copies share the underlying representation.
class HoloFn {
 public:
  enum class Kind { poly, rational, blaschke, blaschke_derivative, outer, product };
  using Jet = std::array<cx, 4>;  // value and first three derivatives

  static HoloFn polynomial(std::vector<cx> coeffs);
  static HoloFn constant(cx c) { return polynomial({c}); }
  /// Denominator must not vanish on the closed disk.
  static HoloFn rational(std::vector<cx> num, std::vector<cx> den);
  static HoloFn blaschke(BlaschkeProduct b);
  static HoloFn blaschke_derivative(BlaschkeProduct b);
  /// Outer function with boundary modulus `modulus`, sampled at the
  /// half-offset angles (j + 1/2) 2pi/n. Built as exp of the Herglotz
  /// extension of the trigonometric interpolant of log modulus; log values
  /// are clipped to [-40, 40] and the clip count recorded.
  static HoloFn outer(std::vector<double> modulus);
  static HoloFn product(std::vector<HoloFn> factors, cx scale = 1.0);

  Kind kind() const;
  cx operator()(cx z) const;
  cx derivative(cx z) const;
  Jet jet(cx z) const;

  /// Zeros in the open disk, with multiplicity, sorted and clustered.
  std::vector<cx> zeros() const;
  /// First `count` Taylor coefficients at 0.
  std::vector<cx> taylor(int count) const;

  // Representation access (valid only for the matching kind).
  const Poly& poly() const;
  const Poly& numerator() const;
  const Poly& denominator() const;
  const BlaschkeProduct& blaschke_spec() const;
  const std::vector<double>& outer_modulus() const;
  int outer_clip_events() const;
  const std::vector<HoloFn>& factors() const;
  cx scale() const;

  friend bool operator==(const HoloFn& a, const HoloFn& b);

  struct Rep;

 private:
  explicit HoloFn(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}
  std::shared_ptr<const Rep> rep_;
};

const char* kind_name(HoloFn::Kind k);

}  // namespace gcelab
