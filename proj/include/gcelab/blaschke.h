#pragma once

#include <array>
#include <functional>
#include <optional>
#include <utility>

#include "gcelab/blaschke_product.h"
#include "gcelab/grid.h"
#include "gcelab/holo.h"

namespace gcelab {

/// Disk automorphism m(z) = e^{i phi} (z - a) / (1 - conj(a) z).
struct MobiusDisk {
  cx a = 0.0;
  double phi = 0.0;

  MobiusDisk() = default;
  /// Validates |a| < 1.
  MobiusDisk(cx a, double phi);

  cx operator()(cx z) const;
  cx derivative(cx z) const;
  cx second_derivative(cx z) const;
  MobiusDisk inverse() const;
  /// this ∘ other.
  MobiusDisk after(const MobiusDisk& other) const;

  static MobiusDisk identity() { return {}; }
};

/// The automorphism taking w1 to w2 (both in the open disk): phi_{w2}^{-1} ∘ phi_{w1}.
MobiusDisk mobius_between(cx w1, cx w2);

/// Holomorphic self-map of the disk known through its 2-jet. Keeps the exact
/// Blaschke representation when there is one.
class SelfMap {
 public:
  using Jet = std::array<cx, 3>;

  static SelfMap constant(cx c);
  static SelfMap blaschke(BlaschkeProduct b);
  /// The caller asserts |f| < 1 on the disk; pullback() checks it on nodes.
  static SelfMap holo(HoloFn f);
  static SelfMap from_jet(std::function<Jet(cx)> jet);

  cx operator()(cx z) const { return jet_(z)[0]; }
  cx derivative(cx z) const { return jet_(z)[1]; }
  Jet jet(cx z) const { return jet_(z); }
  const std::optional<BlaschkeProduct>& as_blaschke() const { return blaschke_; }

 private:
  std::function<Jet(cx)> jet_;
  std::optional<BlaschkeProduct> blaschke_;
};

/// m ∘ B as a Blaschke product of the same degree: zeros solve B(z) = a, the
/// rotation is read off at z = 1.
BlaschkeProduct mobius_apply(const MobiusDisk& m, const BlaschkeProduct& b);
SelfMap mobius_apply(const MobiusDisk& m, const SelfMap& f);

/// Representative of the aut(D)-orbit of F with F(0) = 0 and leading Taylor
/// coefficient real and positive (F'(0) > 0 whenever F'(0) != 0). Recenters
/// first, then rotates. Throws InvalidInput for constant maps and for |F(0)| >= 1.
std::pair<SelfMap, MobiusDisk> normalize(const SelfMap& f);
std::pair<BlaschkeProduct, MobiusDisk> normalize(const BlaschkeProduct& b);

/// u = log(2|F'| / (1 - |F|^2)) - log|H| on the grid nodes (H = 1 if absent).
struct PullbackMetric {
  SelfMap base;
  ScalarField u_field;
  std::optional<HoloFn> weight;
};

/// Throws InvalidInput when |F| >= 1 at an interior node or the density
/// vanishes at a node.
PullbackMetric pullback(const SelfMap& f, const std::optional<HoloFn>& h, const GridPtr& grid);

/// Discrete curvature -Δ w / e^{2w} of the metric e^w, w = u + log|H|, on
/// every node, from the high-order stencil (outer rings use one-sided
/// stencils and are less accurate).
std::vector<double> discrete_curvature(const PullbackMetric& m);

}  // namespace gcelab
