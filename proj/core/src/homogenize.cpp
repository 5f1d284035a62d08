#include "twocap/homogenize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "twocap/capacity.hpp"
#include "twocap/errors.hpp"
#include "twocap/formulas.hpp"
#include "twocap/medium.hpp"

namespace twocap {

namespace {

// Periodic N x N edge Laplacian; wx[p] couples p with its +x neighbour
// (wrapping), wy[p] with its +y neighbour.
struct PeriodicOperator {
  int n;
  std::vector<double> wx, wy, diag;

  std::size_t at(int i, int j) const { return std::size_t(j) * n + std::size_t(i); }
  int up(int k) const { return k + 1 == n ? 0 : k + 1; }
  int down(int k) const { return k == 0 ? n - 1 : k - 1; }

  void apply(const std::vector<double>& x, std::vector<double>& y) const {
    for (int j = 0; j < n; ++j) {
      const int jp = up(j), jm = down(j);
      for (int i = 0; i < n; ++i) {
        const int ip = up(i), im = down(i);
        const std::size_t p = at(i, j);
        y[p] = diag[p] * x[p] - wx[p] * x[at(ip, j)] - wx[at(im, j)] * x[at(im, j)] - wy[p] * x[at(i, jp)] -
               wy[at(i, jm)] * x[at(i, jm)];
      }
    }
  }
};

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / double(v.size());
}

void remove_mean(std::vector<double>& v) {
  const double m = mean(v);
  for (double& x : v) x -= m;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

// Jacobi-preconditioned CG on the singular periodic system restricted to
// mean-zero functions.
int solve_periodic(const PeriodicOperator& A, const std::vector<double>& b, std::vector<double>& x, double tol) {
  const std::size_t N = b.size();
  x.assign(N, 0.0);
  std::vector<double> r = b, z(N), p(N), q(N);
  remove_mean(r);
  const double bnorm = std::sqrt(dot(r, r));
  if (bnorm == 0.0) return 0;
  auto precondition = [&] {
    for (std::size_t k = 0; k < N; ++k) z[k] = r[k] / A.diag[k];
    remove_mean(z);
  };
  precondition();
  p = z;
  double rz = dot(r, z);
  const int max_it = 50 * A.n * 4;
  for (int it = 1; it <= max_it; ++it) {
    A.apply(p, q);
    const double step = rz / dot(p, q);
    for (std::size_t k = 0; k < N; ++k) {
      x[k] += step * p[k];
      r[k] -= step * q[k];
    }
    if (std::sqrt(dot(r, r)) <= tol * bnorm) {
      remove_mean(x);
      return it;
    }
    precondition();
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t k = 0; k < N; ++k) p[k] = z[k] + beta * p[k];
  }
  throw SolverError("cell problem did not converge", max_it, std::sqrt(dot(r, r)) / bnorm);
}

}  // namespace

double EffectiveTensor::min_eigenvalue() const {
  const double m = 0.5 * (a11 + a22);
  const double d = std::hypot(0.5 * (a11 - a22), a12);
  return m - d;
}

double EffectiveTensor::max_eigenvalue() const {
  const double m = 0.5 * (a11 + a22);
  const double d = std::hypot(0.5 * (a11 - a22), a12);
  return m + d;
}

EffectiveTensor cell_problem(double alpha, double beta, int resolution, double tolerance) {
  if (!(alpha > 0.0) || !(beta > 0.0)) throw std::invalid_argument("coefficients must be positive");
  if (resolution < 16 || resolution % 2 != 0)
    throw std::invalid_argument("cell resolution must be even and at least 16");

  const int n = resolution;
  const double h = 1.0 / n;
  // Sample through a checkerboard with the smaller value first; when the
  // caller swaps the values the alpha half-cells carry `alpha` regardless.
  const Checkerboard cb(std::min(alpha, beta), std::max(alpha, beta), 1.0);
  auto value = [&](Vec2 pt) {
    const bool diag_cell = cb.is_alpha(pt) || cb.is_uniform();
    return diag_cell ? alpha : beta;
  };

  PeriodicOperator A{n, std::vector<double>(std::size_t(n) * n), std::vector<double>(std::size_t(n) * n),
                     std::vector<double>(std::size_t(n) * n)};
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const std::size_t p = A.at(i, j);
      A.wx[p] = value({(i + 0.5) * h, j * h});
      A.wy[p] = value({i * h, (j + 0.5) * h});
    }
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const std::size_t p = A.at(i, j);
      A.diag[p] = A.wx[p] + A.wx[A.at(A.down(i), j)] + A.wy[p] + A.wy[A.at(i, A.down(j))];
    }

  // Corrector for direction e_x: L w = h (a^x_p - a^x_{p-x}); likewise e_y.
  std::vector<double> bx(A.diag.size()), by(A.diag.size());
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const std::size_t p = A.at(i, j);
      bx[p] = h * (A.wx[p] - A.wx[A.at(A.down(i), j)]);
      by[p] = h * (A.wy[p] - A.wy[A.at(i, A.down(j))]);
    }
  std::vector<double> w1, w2;
  EffectiveTensor t;
  t.resolution = n;
  t.iterations = solve_periodic(A, bx, w1, tolerance) + solve_periodic(A, by, w2, tolerance);

  // Averaged corrected fluxes (the cell has unit area).
  double a11 = 0.0, a22 = 0.0, a12 = 0.0, a21 = 0.0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const std::size_t p = A.at(i, j);
      const std::size_t px = A.at(A.up(i), j);
      const std::size_t py = A.at(i, A.up(j));
      a11 += A.wx[p] * h * (w1[px] - w1[p] + h);
      a12 += A.wx[p] * h * (w2[px] - w2[p]);
      a21 += A.wy[p] * h * (w1[py] - w1[p]);
      a22 += A.wy[p] * h * (w2[py] - w2[p] + h);
    }
  t.a11 = a11;
  t.a22 = a22;
  t.a12 = 0.5 * (a12 + a21);
  t.sqrt_det = std::sqrt(std::max(0.0, t.a11 * t.a22 - t.a12 * t.a12));
  return t;
}

UniformityReport uniformity_probe(double alpha, double beta, const std::vector<double>& etas,
                                  const std::vector<Vec2>& taus, int points_per_period) {
  if (points_per_period < 4) throw std::invalid_argument("points_per_period must be at least 4");
  UniformityReport rep;
  rep.target = annulus_capacity_exact(1.0, 0.5, std::sqrt(alpha * beta));
  for (double eta : etas) {
    if (!(eta > 0.0) || eta > 0.25) throw std::invalid_argument("uniformity probe needs eta in (0, 1/4]");
    double worst = 0.0;
    for (Vec2 tau : taus) {
      const Checkerboard medium(alpha, beta, eta, tau);
      CapacityOptions opt;
      opt.solver.tolerance = 1e-10;
      const CapacityResult r = solve_annulus(1.0, 0.5, 1.0, 0.0, medium, eta / points_per_period, opt);
      UniformityRow row{eta, medium.tau(), r.energy, std::abs(r.energy - rep.target) / rep.target};
      worst = std::max(worst, row.deviation);
      rep.rows.push_back(row);
    }
    rep.max_deviation.emplace_back(eta, worst);
  }
  return rep;
}

}  // namespace twocap
