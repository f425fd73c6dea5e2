#include "gcelab/poly.h"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "gcelab/errors.h"

namespace gcelab {

cx Poly::operator()(cx z) const {
  cx acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
  return acc;
}

Poly Poly::derivative() const {
  if (c.size() <= 1) return Poly({cx(0.0)});
  std::vector<cx> d(c.size() - 1);
  for (std::size_t k = 1; k < c.size(); ++k) d[k - 1] = static_cast<double>(k) * c[k];
  return Poly(std::move(d));
}

Poly Poly::trimmed(double rel_tol) const {
  double scale = 0.0;
  for (const auto& v : c) scale = std::max(scale, std::abs(v));
  std::vector<cx> out = c;
  while (out.size() > 1 && std::abs(out.back()) <= rel_tol * scale) out.pop_back();
  if (out.empty()) out.push_back(0.0);
  return Poly(std::move(out));
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.c.empty() || b.c.empty()) return Poly({cx(0.0)});
  std::vector<cx> out(a.c.size() + b.c.size() - 1, cx(0.0));
  for (std::size_t i = 0; i < a.c.size(); ++i)
    for (std::size_t j = 0; j < b.c.size(); ++j) out[i + j] += a.c[i] * b.c[j];
  return Poly(std::move(out));
}

Poly operator+(const Poly& a, const Poly& b) {
  std::vector<cx> out(std::max(a.c.size(), b.c.size()), cx(0.0));
  for (std::size_t i = 0; i < a.c.size(); ++i) out[i] += a.c[i];
  for (std::size_t i = 0; i < b.c.size(); ++i) out[i] += b.c[i];
  return Poly(std::move(out));
}

Poly operator-(const Poly& a, const Poly& b) { return a + cx(-1.0) * b; }

Poly operator*(cx s, const Poly& a) {
  Poly out = a;
  for (auto& v : out.c) v *= s;
  return out;
}

Poly from_roots(const std::vector<cx>& rts) {
  Poly p({cx(1.0)});
  for (const auto& r : rts) p = p * Poly({-r, cx(1.0)});
  return p;
}

Poly remainder_monic(const Poly& p, const Poly& divisor) {
  const int m = divisor.degree();
  if (m <= 0) return Poly({cx(0.0)});
  std::vector<cx> r = p.c;
  for (int k = static_cast<int>(r.size()) - 1; k >= m; --k) {
    const cx lead = r[k];
    if (lead == cx(0.0)) continue;
    for (int j = 0; j <= m; ++j) r[k - m + j] -= lead * divisor.c[j];
  }
  r.resize(std::min<std::size_t>(r.size(), static_cast<std::size_t>(m)));
  if (r.empty()) r.push_back(0.0);
  return Poly(std::move(r));
}

std::vector<cx> roots(const Poly& p_in) {
  const Poly p = p_in.trimmed();
  const int n = p.degree();
  if (n <= 0) return {};
  if (std::abs(p.c.back()) == 0.0) throw InvalidInput("roots: zero polynomial");

  // Exact zeros at the origin are split off so the companion matrix sees a
  // nonzero constant term.
  int zeros_at_origin = 0;
  while (zeros_at_origin < n && p.c[zeros_at_origin] == cx(0.0)) ++zeros_at_origin;
  std::vector<cx> out(zeros_at_origin, cx(0.0));
  const int m = n - zeros_at_origin;
  if (m == 0) return out;

  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(m, m);
  const cx lead = p.c.back();
  for (int i = 1; i < m; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < m; ++i) comp(i, m - 1) = -p.c[zeros_at_origin + i] / lead;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(comp, false);
  if (solver.info() != Eigen::Success) throw ConvergenceError("roots: eigenvalue solver failed");

  const Poly dp = p.derivative();
  for (int i = 0; i < m; ++i) {
    cx z = solver.eigenvalues()(i);
    const cx f = p(z);
    const cx df = dp(z);
    if (std::abs(df) > 0.0) {
      const cx z1 = z - f / df;
      if (std::abs(p(z1)) < std::abs(f)) z = z1;
    }
    out.push_back(z);
  }
  return out;
}

std::vector<cx> jet(const Poly& p, cx z, int order) {
  std::vector<cx> out;
  Poly q = p;
  for (int k = 0; k <= order; ++k) {
    out.push_back(q(z));
    q = q.derivative();
  }
  return out;
}

void sort_and_cluster(std::vector<cx>& pts, double cluster_radius) {
  auto lex = [](const cx& a, const cx& b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
  };
  std::sort(pts.begin(), pts.end(), lex);
  std::vector<bool> used(pts.size(), false);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (used[i]) continue;
    std::vector<std::size_t> members{i};
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      if (!used[j] && std::abs(pts[j] - pts[i]) <= cluster_radius) members.push_back(j);
    if (members.size() < 2) continue;
    cx mean = 0.0;
    for (auto k : members) mean += pts[k];
    mean /= static_cast<double>(members.size());
    for (auto k : members) {
      pts[k] = mean;
      used[k] = true;
    }
  }
  std::sort(pts.begin(), pts.end(), lex);
}

}  // namespace gcelab
