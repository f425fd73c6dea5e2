#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <sstream>

#include "gcelab/canonical.h"
#include "gcelab/errors.h"

namespace gcelab {

std::vector<int> min_cost_assignment(const std::vector<std::vector<double>>& cost) {
  const int n = static_cast<int>(cost.size());
  for (const auto& row : cost)
    if (static_cast<int>(row.size()) != n) throw InvalidInput("assignment: cost matrix must be square");
  const double inf = std::numeric_limits<double>::infinity();
  // Potentials formulation, 1-based with a virtual column 0.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> col(n);
  for (int j = 1; j <= n; ++j) col[p[j] - 1] = j - 1;
  return col;
}

namespace {

// A = z P with P monic of degree d - 1, packed as 2(d - 1) reals.
Poly numerator_from(const Eigen::VectorXd& x, int d) {
  std::vector<cx> a(d + 1, 0.0);
  for (int k = 0; k + 1 < d; ++k) a[k + 1] = cx(x[2 * k], x[2 * k + 1]);
  a[d] = 1.0;
  return Poly(a);
}

// Reversed conjugate A*(z) = z^d conj(A(1 / conj z)).
Poly reversed(const Poly& A, int d) {
  std::vector<cx> c(d + 1);
  for (int k = 0; k <= d; ++k) c[k] = std::conj(A.c[d - k]);
  return Poly(c);
}

// Numerator of F' modulo the monic polynomial with the target critical points.
Eigen::VectorXd residual(const Eigen::VectorXd& x, const Poly& target, int d) {
  const Poly A = numerator_from(x, d);
  const Poly As = reversed(A, d);
  const Poly M = A.derivative() * As - A * As.derivative();
  Poly R = remainder_monic(M, target);
  Eigen::VectorXd out(2 * (d - 1));
  for (int k = 0; k + 1 < d; ++k) {
    const cx v = k < static_cast<int>(R.c.size()) ? R.c[k] : cx(0.0);
    out[2 * k] = v.real();
    out[2 * k + 1] = v.imag();
  }
  return out;
}

bool roots_inside(const Eigen::VectorXd& x, int d) {
  std::vector<cx> c(d);
  for (int k = 0; k + 1 < d; ++k) c[k] = cx(x[2 * k], x[2 * k + 1]);
  c[d - 1] = 1.0;
  for (cx z : roots(Poly(c)))
    if (!(std::abs(z) < 1.0 - 1e-12)) return false;
  return true;
}

// Newton at fixed target; returns false on failure.
bool newton(Eigen::VectorXd& x, const Poly& target, int d) {
  const int m = 2 * (d - 1);
  Eigen::VectorXd R = residual(x, target, d);
  for (int it = 0; it < 40; ++it) {
    if (R.lpNorm<Eigen::Infinity>() <= 1e-14) return roots_inside(x, d);
    Eigen::MatrixXd J(m, m);
    for (int c = 0; c < m; ++c) {
      const double h = 1e-7 * std::max(1.0, std::abs(x[c]));
      Eigen::VectorXd xp = x, xm = x;
      xp[c] += h;
      xm[c] -= h;
      J.col(c) = (residual(xp, target, d) - residual(xm, target, d)) / (2.0 * h);
    }
    const Eigen::VectorXd step = J.fullPivLu().solve(-R);
    if (!step.allFinite()) return false;
    // Backtrack on the residual norm.
    double t = 1.0;
    bool ok = false;
    for (; t >= 1.0 / 64; t *= 0.5) {
      Eigen::VectorXd xt = x + t * step;
      Eigen::VectorXd Rt = residual(xt, target, d);
      if (Rt.norm() < R.norm()) {
        x = xt;
        R = Rt;
        ok = true;
        break;
      }
    }
    if (!ok) return R.lpNorm<Eigen::Infinity>() <= 1e-12 && roots_inside(x, d);
  }
  return R.lpNorm<Eigen::Infinity>() <= 1e-12 && roots_inside(x, d);
}

std::string describe(const std::vector<cx>& pts) {
  std::ostringstream os;
  os.precision(17);
  os << "{";
  for (std::size_t k = 0; k < pts.size(); ++k) os << (k ? ", " : "") << pts[k];
  os << "}";
  return os.str();
}

}  // namespace

HeinsResult heins_solve(const std::vector<cx>& critical, double tol, const std::vector<std::vector<cx>>& waypoints) {
  const int d = static_cast<int>(critical.size()) + 1;
  if (d > 8) throw InvalidInput("heins_solve: at most 7 critical points supported");
  if (!(tol > 0.0)) throw InvalidInput("heins_solve: tolerance must be positive");
  for (cx c : critical)
    if (!(std::abs(c) < 1.0)) throw InvalidInput("heins_solve: critical points must lie in the open disk");
  for (const auto& w : waypoints) {
    if (w.size() != critical.size()) throw InvalidInput("heins_solve: waypoint size must match the critical set");
    for (cx c : w)
      if (!(std::abs(c) < 1.0)) throw InvalidInput("heins_solve: waypoints must lie in the open disk");
  }

  HeinsResult res;
  res.targets = critical;
  if (d == 1) {
    res.product = BlaschkeProduct({0.0}, 0.0);
    return res;
  }

  std::vector<std::vector<cx>> path;
  path.emplace_back(critical.size(), 0.0);
  for (const auto& w : waypoints) path.push_back(w);
  path.push_back(critical);

  Eigen::VectorXd x = Eigen::VectorXd::Zero(2 * (d - 1));  // P = z^{d-1}
  for (std::size_t seg = 0; seg + 1 < path.size(); ++seg) {
    const auto& a = path[seg];
    const auto& b = path[seg + 1];
    double t = 0.0, dt = 0.25;
    while (t < 1.0) {
      const double t1 = std::min(1.0, t + dt);
      std::vector<cx> pts(a.size());
      for (std::size_t k = 0; k < a.size(); ++k) pts[k] = a[k] + t1 * (b[k] - a[k]);
      Eigen::VectorXd trial = x;
      if (newton(trial, from_roots(pts), d)) {
        x = trial;
        t = t1;
        ++res.steps;
        dt = std::min(0.5, 1.5 * dt);
      } else {
        dt *= 0.5;
        if (dt < 1e-4) {
          std::vector<cx> good(a.size());
          for (std::size_t k = 0; k < a.size(); ++k) good[k] = a[k] + t * (b[k] - a[k]);
          throw ConvergenceError("heins_solve: continuation step failed; last good critical set " + describe(good));
        }
      }
    }
  }

  std::vector<cx> zs{0.0};
  {
    std::vector<cx> c(d);
    for (int k = 0; k + 1 < d; ++k) c[k] = cx(x[2 * k], x[2 * k + 1]);
    c[d - 1] = 1.0;
    for (cx z : roots(Poly(c))) zs.push_back(z);
  }
  sort_and_cluster(zs);
  res.product = BlaschkeProduct(zs, 0.0);

  const auto found = critical_points(res.product);
  const std::size_t n = critical.size();
  std::vector<std::vector<double>> cost(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) cost[i][j] = std::abs(critical[i] - found[j]);
  const auto col = min_cost_assignment(cost);
  res.recovered.resize(n);
  res.distances.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    res.recovered[i] = found[col[i]];
    res.distances[i] = cost[i][col[i]];
    res.assignment_residual = std::max(res.assignment_residual, res.distances[i]);
  }
  if (res.assignment_residual > tol)
    throw ConvergenceError("heins_solve: assignment residual " + std::to_string(res.assignment_residual) +
                           " exceeds tolerance");
  return res;
}

}  // namespace gcelab
