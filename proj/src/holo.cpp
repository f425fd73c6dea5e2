#include "gcelab/holo.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <variant>

#include "gcelab/errors.h"

namespace gcelab {

namespace {

struct PolyRep {
  Poly p;
  bool operator==(const PolyRep& o) const { return p.c == o.p.c; }
};
struct RationalRep {
  Poly num, den;
  bool operator==(const RationalRep& o) const { return num.c == o.num.c && den.c == o.den.c; }
};
struct BlaschkeRep {
  BlaschkeProduct b;
  bool operator==(const BlaschkeRep&) const = default;
};
struct BlaschkeDerivRep {
  BlaschkeProduct b;
  bool operator==(const BlaschkeDerivRep&) const = default;
};
struct OuterRep {
  std::vector<double> modulus;
  Poly herglotz;  // A(z); the function is exp(A)
  int clip_events = 0;
  bool operator==(const OuterRep& o) const { return modulus == o.modulus; }
};
struct ProductRep {
  std::vector<HoloFn> factors;
  cx scale;
  bool operator==(const ProductRep& o) const { return scale == o.scale && factors == o.factors; }
};

constexpr double kBinom[4][4] = {{1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};

HoloFn::Jet rational_jet(const Poly& num, const Poly& den, cx z) {
  const auto n = jet(num, z, 3);
  const auto d = jet(den, z, 3);
  HoloFn::Jet f{};
  for (int k = 0; k < 4; ++k) {
    cx acc = n[k];
    for (int m = 1; m <= k; ++m) acc -= kBinom[k][m] * d[m] * f[k - m];
    f[k] = acc / d[0];
  }
  return f;
}

HoloFn::Jet jet_product(const HoloFn::Jet& a, const HoloFn::Jet& b) {
  HoloFn::Jet out{};
  for (int k = 0; k < 4; ++k)
    for (int m = 0; m <= k; ++m) out[k] += kBinom[k][m] * a[m] * b[k - m];
  return out;
}

std::vector<cx> interior_roots(const Poly& p) {
  std::vector<cx> out;
  for (const auto& z : roots(p))
    if (std::abs(z) < 1.0) out.push_back(z);
  sort_and_cluster(out);
  return out;
}

}  // namespace

struct HoloFn::Rep {
  std::variant<PolyRep, RationalRep, BlaschkeRep, BlaschkeDerivRep, OuterRep, ProductRep> v;
};

const char* kind_name(HoloFn::Kind k) {
  switch (k) {
    case HoloFn::Kind::poly: return "poly";
    case HoloFn::Kind::rational: return "rational";
    case HoloFn::Kind::blaschke: return "blaschke";
    case HoloFn::Kind::blaschke_derivative: return "blaschke_derivative";
    case HoloFn::Kind::outer: return "outer";
    case HoloFn::Kind::product: return "product";
  }
  return "?";
}

HoloFn HoloFn::polynomial(std::vector<cx> coeffs) {
  if (coeffs.empty()) coeffs.push_back(0.0);
  for (const auto& c : coeffs)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw InvalidInput("poly: non-finite coefficient");
  return HoloFn(std::make_shared<Rep>(Rep{PolyRep{Poly(std::move(coeffs))}}));
}

HoloFn HoloFn::rational(std::vector<cx> num, std::vector<cx> den) {
  Poly n(std::move(num)), d(std::move(den));
  if (n.c.empty()) n.c.push_back(0.0);
  const Poly dt = d.trimmed(0.0);
  if (d.c.empty() || (dt.degree() == 0 && dt.c[0] == cx(0.0)))
    throw InvalidInput("rational: zero denominator");
  for (const auto& z : roots(dt))
    if (std::abs(z) <= 1.0 + 1e-12)
      throw InvalidInput("rational: denominator vanishes on the closed disk");
  return HoloFn(std::make_shared<Rep>(Rep{RationalRep{std::move(n), std::move(d)}}));
}

HoloFn HoloFn::blaschke(BlaschkeProduct b) {
  return HoloFn(std::make_shared<Rep>(Rep{BlaschkeRep{std::move(b)}}));
}

HoloFn HoloFn::blaschke_derivative(BlaschkeProduct b) {
  if (b.degree() < 1) throw InvalidInput("blaschke_derivative: degree must be >= 1");
  return HoloFn(std::make_shared<Rep>(Rep{BlaschkeDerivRep{std::move(b)}}));
}

HoloFn HoloFn::outer(std::vector<double> modulus) {
  const int n = static_cast<int>(modulus.size());
  if (n < 2 || n % 2 != 0) throw InvalidInput("outer: need an even number (>= 2) of samples");
  OuterRep rep;
  std::vector<double> logw(n);
  for (int j = 0; j < n; ++j) {
    const double w = modulus[j];
    if (!(w > 0.0) || !std::isfinite(w)) throw InvalidInput("outer: modulus samples must be positive and finite");
    double l = std::log(w);
    if (l > 40.0 || l < -40.0) {
      ++rep.clip_events;
      l = std::clamp(l, -40.0, 40.0);
    }
    logw[j] = l;
  }
  const int N = n / 2;
  const double dth = 2.0 * std::numbers::pi / n;
  std::vector<cx> a(N + 1, cx(0.0));
  for (int k = 0; k <= N; ++k) {
    cx s = 0.0;
    for (int j = 0; j < n; ++j) s += logw[j] * std::polar(1.0, -k * (j + 0.5) * dth);
    s /= static_cast<double>(n);
    a[k] = (k == 0 || k == N) ? s : 2.0 * s;
  }
  a[0] = a[0].real();
  rep.modulus = std::move(modulus);
  rep.herglotz = Poly(std::move(a));
  return HoloFn(std::make_shared<Rep>(Rep{std::move(rep)}));
}

HoloFn HoloFn::product(std::vector<HoloFn> factors, cx scale) {
  if (!std::isfinite(scale.real()) || !std::isfinite(scale.imag()))
    throw InvalidInput("product: non-finite scale");
  return HoloFn(std::make_shared<Rep>(Rep{ProductRep{std::move(factors), scale}}));
}

HoloFn::Kind HoloFn::kind() const { return static_cast<Kind>(rep_->v.index()); }

HoloFn::Jet HoloFn::jet(cx z) const {
  return std::visit(
      [&](const auto& r) -> Jet {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, PolyRep>) {
          const auto j = gcelab::jet(r.p, z, 3);
          return {j[0], j[1], j[2], j[3]};
        } else if constexpr (std::is_same_v<T, RationalRep>) {
          return rational_jet(r.num, r.den, z);
        } else if constexpr (std::is_same_v<T, BlaschkeRep>) {
          auto j = r.b.jet(z);
          j[1] = r.b.derivative(z);
          return j;
        } else if constexpr (std::is_same_v<T, BlaschkeDerivRep>) {
          // Jet of F' is (F', F'', F''', F''''); the last needs one more
          // Leibniz step on the rational form.
          const auto j = r.b.jet(z);
          const Poly num = r.b.numerator();
          const Poly den = r.b.denominator();
          const auto n = gcelab::jet(num, z, 4);
          const auto d = gcelab::jet(den, z, 4);
          static constexpr double b4[5] = {1, 4, 6, 4, 1};
          cx f4 = n[4];
          for (int m = 1; m <= 4; ++m) f4 -= b4[m] * d[m] * j[4 - m];
          f4 /= d[0];
          return {r.b.derivative(z), j[2], j[3], f4};
        } else if constexpr (std::is_same_v<T, OuterRep>) {
          const auto a = gcelab::jet(r.herglotz, z, 3);
          const cx f = std::exp(a[0]);
          return {f, f * a[1], f * (a[2] + a[1] * a[1]), f * (a[3] + 3.0 * a[1] * a[2] + a[1] * a[1] * a[1])};
        } else {
          Jet acc{r.scale, 0.0, 0.0, 0.0};
          for (const auto& f : r.factors) acc = jet_product(acc, f.jet(z));
          return acc;
        }
      },
      rep_->v);
}

cx HoloFn::operator()(cx z) const {
  return std::visit(
      [&](const auto& r) -> cx {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, PolyRep>) return r.p(z);
        else if constexpr (std::is_same_v<T, RationalRep>) return r.num(z) / r.den(z);
        else if constexpr (std::is_same_v<T, BlaschkeRep>) return r.b(z);
        else if constexpr (std::is_same_v<T, BlaschkeDerivRep>) return r.b.derivative(z);
        else if constexpr (std::is_same_v<T, OuterRep>) return std::exp(r.herglotz(z));
        else {
          cx acc = r.scale;
          for (const auto& f : r.factors) acc *= f(z);
          return acc;
        }
      },
      rep_->v);
}

cx HoloFn::derivative(cx z) const {
  if (kind() == Kind::poly) return poly().derivative()(z);
  return jet(z)[1];
}

std::vector<cx> HoloFn::zeros() const {
  return std::visit(
      [&](const auto& r) -> std::vector<cx> {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, PolyRep>) {
          const Poly t = r.p.trimmed(0.0);
          if (t.degree() == 0 && t.c[0] == cx(0.0)) throw InvalidInput("zeros: identically zero function");
          return interior_roots(t);
        } else if constexpr (std::is_same_v<T, RationalRep>) {
          const Poly t = r.num.trimmed(0.0);
          if (t.degree() == 0 && t.c[0] == cx(0.0)) throw InvalidInput("zeros: identically zero function");
          return interior_roots(t);
        } else if constexpr (std::is_same_v<T, BlaschkeRep>) {
          auto z = r.b.zeros;
          sort_and_cluster(z);
          return z;
        } else if constexpr (std::is_same_v<T, BlaschkeDerivRep>) {
          return critical_points(r.b);
        } else if constexpr (std::is_same_v<T, OuterRep>) {
          return {};
        } else {
          if (r.scale == cx(0.0)) throw InvalidInput("zeros: identically zero function");
          std::vector<cx> out;
          for (const auto& f : r.factors) {
            const auto z = f.zeros();
            out.insert(out.end(), z.begin(), z.end());
          }
          sort_and_cluster(out);
          return out;
        }
      },
      rep_->v);
}

std::vector<cx> HoloFn::taylor(int count) const {
  if (kind() == Kind::poly) {
    std::vector<cx> c = poly().c;
    c.resize(count, cx(0.0));
    return c;
  }
  const int m = std::max(128, 4 * count);
  const double rad = 0.5;
  std::vector<cx> samples(m);
  for (int k = 0; k < m; ++k) samples[k] = (*this)(std::polar(rad, 2.0 * std::numbers::pi * k / m));
  std::vector<cx> out(count);
  for (int n = 0; n < count; ++n) {
    cx s = 0.0;
    for (int k = 0; k < m; ++k) s += samples[k] * std::polar(1.0, -2.0 * std::numbers::pi * n * k / m);
    out[n] = s / (static_cast<double>(m) * std::pow(rad, n));
  }
  return out;
}

const Poly& HoloFn::poly() const { return std::get<PolyRep>(rep_->v).p; }
const Poly& HoloFn::numerator() const { return std::get<RationalRep>(rep_->v).num; }
const Poly& HoloFn::denominator() const { return std::get<RationalRep>(rep_->v).den; }
const BlaschkeProduct& HoloFn::blaschke_spec() const {
  if (const auto* r = std::get_if<BlaschkeRep>(&rep_->v)) return r->b;
  return std::get<BlaschkeDerivRep>(rep_->v).b;
}
const std::vector<double>& HoloFn::outer_modulus() const { return std::get<OuterRep>(rep_->v).modulus; }
int HoloFn::outer_clip_events() const { return std::get<OuterRep>(rep_->v).clip_events; }
const std::vector<HoloFn>& HoloFn::factors() const { return std::get<ProductRep>(rep_->v).factors; }
cx HoloFn::scale() const { return std::get<ProductRep>(rep_->v).scale; }

bool operator==(const HoloFn& a, const HoloFn& b) {
  if (a.rep_ == b.rep_) return true;
  return a.rep_->v == b.rep_->v;
}

}  // namespace gcelab
