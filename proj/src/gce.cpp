#include "gcelab/gce.h"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "gcelab/errors.h"
#include "gcelab/stencil.h"

namespace gcelab {

namespace {

constexpr double kClampU = 40.0;

// e^{2u} with the overflow clamp; counts clamped nodes.
double exp2u(double u, int& clamps) {
  if (u > kClampU) {
    ++clamps;
    u = kClampU;
  }
  return std::exp(2.0 * u);
}

struct Pointwise {
  double scaled = 0.0;  // max |Δu - ρ e^{2u}| / (1 + ρ e^{2u})
  double floor = 0.0;   // rounding estimate of the same quantity
  int clamps = 0;
};

Pointwise pointwise_residual(const FluxLaplacian& L, const DiskGrid& g, std::span<const double> u,
                             std::span<const double> b, std::span<const double> rho) {
  Pointwise out;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (int k = 0; k < L.A.outerSize(); ++k) {
    double flux = b[k], mag = std::abs(b[k]);
    for (Eigen::SparseMatrix<double>::InnerIterator it(L.A, k); it; ++it) {
      flux += it.value() * u[it.row()];
      mag += std::abs(it.value() * u[it.row()]);
    }
    const double src = rho[k] * exp2u(u[k], out.clamps);
    const double scale = 1.0 + src;
    out.scaled = std::max(out.scaled, std::abs(flux / L.volume[k] - src) / scale);
    out.floor = std::max(out.floor, 16.0 * eps * (mag / L.volume[k] + src) / scale);
  }
  (void)g;
  return out;
}

// Nodes and weights on [-1, 1] (Golub-Welsch).
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) J(k, k - 1) = J(k - 1, k) = k / std::sqrt(4.0 * k * k - 1.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  std::vector<double> x(n), w(n);
  for (int k = 0; k < n; ++k) {
    x[k] = es.eigenvalues()[k];
    w[k] = 2.0 * es.eigenvectors()(0, k) * es.eigenvectors()(0, k);
  }
  return {x, w};
}

}  // namespace

GceProblem::GceProblem(HoloFn H_, std::vector<double> h_, GridPtr grid_)
    : H(std::move(H_)), h(std::move(h_)), grid(std::move(grid_)) {
  if (!grid) throw InvalidInput("problem: missing grid");
  if (static_cast<int>(h.size()) != grid->n_theta())
    throw InvalidInput("problem: boundary data needs one value per boundary angle");
  for (double v : h)
    if (!std::isfinite(v)) throw InvalidInput("problem: boundary data must be finite");
  double mx = 0.0;
  for (int j = 0; j < grid->n_theta(); ++j) mx = std::max(mx, std::abs(H(std::polar(0.7, grid->angles()[j]))));
  if (mx == 0.0) throw InvalidInput("problem: H must not vanish identically");
}

GceProblem GceProblem::constant(HoloFn H, double h, GridPtr grid) {
  std::vector<double> hv(grid->n_theta(), h);
  return GceProblem(std::move(H), std::move(hv), std::move(grid));
}

std::vector<double> GceProblem::density() const {
  std::vector<double> rho(grid->size());
  for (int i = 0; i < grid->n_r(); ++i)
    for (int j = 0; j < grid->n_theta(); ++j) {
      const double v = std::norm(H(grid->node(i, j)));
      if (!std::isfinite(v)) throw InvalidInput("problem: H is not finite at a grid node");
      rho[grid->index(i, j)] = v;
    }
  return rho;
}

GceSolution solve_gce(const GceProblem& pb, double tol, int max_iter, const std::optional<ScalarField>& init) {
  if (!(tol > 0.0)) throw InvalidInput("solve_gce: tolerance must be positive");
  if (max_iter < 0) throw InvalidInput("solve_gce: max_iter must be nonnegative");
  const DiskGrid& g = *pb.grid;
  const FluxLaplacian L(g);
  const auto b = L.boundary_term(g, pb.h);
  const auto rho = pb.density();
  const Eigen::Index n = static_cast<Eigen::Index>(g.size());

  Eigen::VectorXd u(n);
  if (init) {
    if (init->grid()->spec() != g.spec()) throw InvalidInput("solve_gce: initial field lives on another grid");
    for (Eigen::Index k = 0; k < n; ++k) u[k] = init->values()[k];
  } else {
    const auto ph = pb.harmonic_majorant();
    for (Eigen::Index k = 0; k < n; ++k) u[k] = ph.values()[k];
  }

  auto residual_vec = [&](const Eigen::VectorXd& x, Eigen::VectorXd& R) {
    int clamps = 0;
    R = L.A * x;
    for (Eigen::Index k = 0; k < n; ++k) R[k] += b[k] - L.volume[k] * rho[k] * exp2u(x[k], clamps);
  };
  auto merit = [&](const Eigen::VectorXd& R) {
    double s = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) s += (R[k] / L.volume[k]) * (R[k] / L.volume[k]);
    return std::sqrt(s);
  };
  auto finished = [&](const Eigen::VectorXd& x) {
    const auto pr = pointwise_residual(L, g, {x.data(), static_cast<std::size_t>(n)}, b, rho);
    return pr.clamps == 0 && pr.scaled <= std::max(tol, pr.floor);
  };

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
  Eigen::SparseMatrix<double> negJ = -L.A;
  negJ.makeCompressed();
  solver.analyzePattern(negJ);

  Eigen::VectorXd R, Rt, d, ut;
  residual_vec(u, R);
  double m0 = merit(R);
  int it = 0;
  for (; it < max_iter && !finished(u); ++it) {
    negJ = -L.A;
    int clamps = 0;
    for (Eigen::Index k = 0; k < n; ++k) negJ.coeffRef(k, k) += 2.0 * L.volume[k] * rho[k] * exp2u(u[k], clamps);
    solver.factorize(negJ);
    if (solver.info() != Eigen::Success) throw ConvergenceError("solve_gce: Jacobian factorization failed");
    d = solver.solve(R);
    double t = 1.0;
    bool accepted = false;
    for (; t >= 1e-10; t *= 0.5) {
      ut = u + t * d;
      residual_vec(ut, Rt);
      const double m1 = merit(Rt);
      if (std::isfinite(m1) && m1 <= (1.0 - 1e-4 * t) * m0) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;  // stagnation: report the current iterate honestly
    u = ut;
    R = Rt;
    m0 = merit(R);
    for (Eigen::Index k = 0; k < n; ++k)
      if (!std::isfinite(u[k])) throw ConvergenceError("solve_gce: non-finite iterate");
  }

  std::vector<double> vals(u.data(), u.data() + n);
  for (double v : vals)
    if (!std::isfinite(v)) throw ConvergenceError("solve_gce: non-finite iterate");
  GceSolution sol{ScalarField(pb.grid, std::move(vals), pb.h)};
  const auto pr = pointwise_residual(L, g, sol.u.values(), b, rho);
  sol.pde_residual = pr.scaled;
  sol.residual_floor = pr.floor;
  sol.clamp_events = pr.clamps;
  sol.converged = pr.clamps == 0 && pr.scaled <= std::max(tol, pr.floor);
  sol.iterations = it;
  sol.method = Method::newton;
  sol.weak_residual = residual(sol.u, pb, ResidualMode::weak);
  return sol;
}

ScalarField picard_step(const ScalarField& v, const GceProblem& pb, const GreenOperator& op) {
  const DiskGrid& g = *pb.grid;
  if (v.grid()->spec() != g.spec() || op.grid()->spec() != g.spec())
    throw InvalidInput("picard_step: fields live on different grids");
  const auto ph = pb.harmonic_majorant();
  const auto rho = pb.density();
  std::vector<double> src(g.size());
  int clamps = 0;
  for (std::size_t k = 0; k < src.size(); ++k) {
    if (v.values()[k] > ph.values()[k] + 1e-6 * (1.0 + std::abs(ph.values()[k])))
      throw InvalidInput("picard_step: v exceeds the harmonic majorant P_h");
    src[k] = rho[k] * exp2u(v.values()[k], clamps);
  }
  BlaschkeMeasureSpec mu;
  mu.weight = ScalarField(pb.grid, src);
  if (!std::isfinite(blaschke_mass(mu, g))) throw InvalidInput("picard_step: induced measure is not a Blaschke measure");
  const auto gp = op.apply(src);
  std::vector<double> out(g.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = ph.values()[k] - gp[k];
  return ScalarField(pb.grid, std::move(out), pb.h);
}

ScalarField picard_step(const ScalarField& v, const GceProblem& pb) {
  return picard_step(v, pb, GreenOperator(pb.grid));
}

namespace {
constexpr int kBumpPower = 6;
}

double Bump::value(cx z) const {
  const double r = std::abs(z);
  const double t = (r - center) / delta;
  if (std::abs(t) >= 1.0) return 0.0;
  return std::pow(1.0 - t * t, kBumpPower) * std::cos(m * std::arg(z) + alpha);
}

double Bump::laplacian(cx z) const {
  const double r = std::abs(z);
  const double t = (r - center) / delta;
  if (std::abs(t) >= 1.0) return 0.0;
  constexpr int k = kBumpPower;
  const double q = 1.0 - t * t;
  const double beta = std::pow(q, k);
  const double b1 = -2.0 * k * t * std::pow(q, k - 1) / delta;
  const double b2 = (4.0 * k * (k - 1) * t * t * std::pow(q, k - 2) - 2.0 * k * std::pow(q, k - 1)) / (delta * delta);
  const double ang = std::cos(m * std::arg(z) + alpha);
  return (b2 + b1 / r - m * m * beta / (r * r)) * ang;
}

const std::vector<Bump>& weak_test_family() {
  static const std::vector<Bump> family{
      {0.45, 0.35, 0, 0.0}, {0.50, 0.35, 1, 0.3}, {0.55, 0.35, 2, 1.1},
      {0.50, 0.35, 3, 2.0}, {0.45, 0.35, 1, 4.0}, {0.55, 0.35, 0, 0.0},
      {0.30, 0.25, 0, 0.0}, {0.40, 0.25, 1, 0.7}, {0.50, 0.25, 2, 2.5},
      {0.60, 0.25, 3, 5.1}, {0.65, 0.25, 0, 0.0}, {0.50, 0.25, 1, 3.3},
      {0.40, 0.25, 2, 0.2}, {0.20, 0.15, 0, 0.0}, {0.35, 0.15, 1, 1.9},
      {0.50, 0.15, 2, 4.4}, {0.65, 0.15, 3, 0.9}, {0.75, 0.15, 0, 0.0},
      {0.30, 0.15, 2, 5.7}, {0.60, 0.15, 1, 2.8},
  };
  return family;
}

double residual(const ScalarField& u, const GceProblem& pb, ResidualMode mode) {
  const DiskGrid& g = *pb.grid;
  if (u.grid()->spec() != g.spec()) throw InvalidInput("residual: field lives on another grid");
  const auto rho = pb.density();
  if (mode == ResidualMode::stencil) {
    const FluxLaplacian L(g);
    const auto b = L.boundary_term(g, pb.h);
    return pointwise_residual(L, g, u.values(), b, rho).scaled;
  }
  // Each bump is integrated on its own support: Gauss-Legendre in r, the
  // grid angles in theta, u interpolated along diameters.
  static const auto gl = gauss_legendre(24);
  double worst = 0.0;
  int clamps = 0;
  const int n = g.n_theta();
  for (const auto& bump : weak_test_family()) {
    double total = 0.0;
    for (std::size_t q = 0; q < gl.first.size(); ++q) {
      const double r = bump.center + bump.delta * gl.first[q];
      double ring = 0.0;
      for (int j = 0; j < n; ++j) {
        const cx z = std::polar(r, g.angles()[j]);
        const double uv = u.sample_ray(j, r);
        ring += uv * bump.laplacian(z) - std::norm(pb.H(z)) * exp2u(uv, clamps) * bump.value(z);
      }
      total += gl.second[q] * bump.delta * r * ring * g.dtheta();
    }
    worst = std::max(worst, std::abs(total));
  }
  return worst;
}

ComparisonReport check_comparison(const ScalarField& u, const ScalarField& v, const GceProblem& pb, double eps,
                                  double stencil_tol) {
  const DiskGrid& g = *pb.grid;
  if (u.grid()->spec() != g.spec() || v.grid()->spec() != g.spec())
    throw InvalidInput("check_comparison: fields live on different grids");
  if (!u.boundary() || !v.boundary()) throw InvalidInput("check_comparison: both fields need boundary traces");
  for (int j = 0; j < g.n_theta(); ++j)
    if ((*u.boundary())[j] > (*v.boundary())[j] + eps)
      throw InvalidInput("check_comparison: u exceeds v on the boundary");

  const FluxLaplacian L(g);
  const auto rho = pb.density();
  auto defect = [&](const ScalarField& f, double sign) {
    const auto b = L.boundary_term(g, *f.boundary());
    Eigen::Map<const Eigen::VectorXd> x(f.values().data(), static_cast<Eigen::Index>(g.size()));
    const Eigen::VectorXd flux = L.A * x;
    double worst = 0.0;
    int clamps = 0;
    for (std::size_t k = 0; k < g.size(); ++k) {
      const double src = rho[k] * exp2u(f.values()[k], clamps);
      const double d = (flux[k] + b[k]) / L.volume[k] - src;  // >= 0 for a subsolution
      worst = std::max(worst, -sign * d / (1.0 + src));
    }
    return worst;
  };
  ComparisonReport rep;
  rep.sub_defect = defect(u, 1.0);
  rep.super_defect = defect(v, -1.0);
  if (rep.sub_defect > stencil_tol) throw InvalidInput("check_comparison: u is not a subsolution");
  if (rep.super_defect > stencil_tol) throw InvalidInput("check_comparison: v is not a supersolution");
  rep.max_difference = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < g.n_r(); ++i)
    for (int j = 0; j < g.n_theta(); ++j) {
      const double diff = u.at(i, j) - v.at(i, j);
      rep.max_difference = std::max(rep.max_difference, diff);
      if (diff > eps) rep.violations.push_back({i, j, g.node(i, j), diff});
    }
  return rep;
}

}  // namespace gcelab
