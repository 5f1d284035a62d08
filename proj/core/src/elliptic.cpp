#include "twocap/elliptic.hpp"

#include <cmath>
#include <fstream>
#include <optional>
#include <stdexcept>

#include "twocap/errors.hpp"
#include "twocap/multigrid.hpp"

namespace twocap {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

}  // namespace

EdgeOperator::EdgeOperator(const Grid& g, std::vector<double> wx, std::vector<double> wy)
    : grid_(g), wx_(std::move(wx)), wy_(std::move(wy)), diag_(g.size(), 0.0) {
  const int n = grid_.n;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const std::size_t p = grid_.index(i, j);
      double d = 0.0;
      if (i > 0) d += wx_[p - 1];
      if (i < n - 1) d += wx_[p];
      if (j > 0) d += wy_[p - n];
      if (j < n - 1) d += wy_[p];
      diag_[p] = d;
    }
  }
}

EdgeOperator EdgeOperator::assemble(const Grid& grid, const Checkerboard& medium) {
  if (grid.n < 2 || !(grid.h > 0.0)) throw std::invalid_argument("grid needs n >= 2 and h > 0");
  if (!medium.is_uniform() && grid.h > medium.delta() / 4.0 * (1.0 + 1e-12))
    throw ResolutionError("period unresolved: h exceeds delta/4");

  const int n = grid.n;
  std::vector<double> wx(grid.size(), 0.0), wy(grid.size(), 0.0);
  if (medium.is_uniform()) {
    const double a = medium.alpha();
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const std::size_t p = grid.index(i, j);
        if (i < n - 1) wx[p] = (j == 0 || j == n - 1) ? 0.5 * a : a;
        if (j < n - 1) wy[p] = (i == 0 || i == n - 1) ? 0.5 * a : a;
      }
    return EdgeOperator(grid, std::move(wx), std::move(wy));
  }

  // The half-cell parity of an edge midpoint factors into a column part and a
  // row part, so tabulate both once.
  const double d = medium.delta();
  const Vec2 tau = medium.tau();
  std::vector<long> col_node(n), col_mid(n), row_node(n), row_mid(n);
  for (int k = 0; k < n; ++k) {
    col_node[k] = half_cell_index(grid.x(k) / d + tau.x);
    col_mid[k] = half_cell_index(grid.mid_x(k, 0).x / d + tau.x);
    row_node[k] = half_cell_index(grid.y(k) / d + tau.y);
    row_mid[k] = half_cell_index(grid.mid_y(0, k).y / d + tau.y);
  }
  const double a = medium.alpha();
  const double b = medium.beta();
  for (int j = 0; j < n; ++j) {
    const double gx = (j == 0 || j == n - 1) ? 0.5 : 1.0;
    for (int i = 0; i < n; ++i) {
      const std::size_t p = grid.index(i, j);
      if (i < n - 1) wx[p] = gx * (diagonal_half_cell(col_mid[i], row_node[j]) ? a : b);
      if (j < n - 1) {
        const double gy = (i == 0 || i == n - 1) ? 0.5 : 1.0;
        wy[p] = gy * (diagonal_half_cell(col_node[i], row_mid[j]) ? a : b);
      }
    }
  }
  return EdgeOperator(grid, std::move(wx), std::move(wy));
}

EdgeOperator EdgeOperator::from_weights(const Grid& grid, std::vector<double> wx, std::vector<double> wy) {
  if (wx.size() != grid.size() || wy.size() != grid.size())
    throw std::invalid_argument("edge weight arrays must have one entry per node");
  return EdgeOperator(grid, std::move(wx), std::move(wy));
}

double EdgeOperator::coefficient_x(int i, int j) const {
  const double g = (j == 0 || j == grid_.n - 1) ? 0.5 : 1.0;
  return wx_[grid_.index(i, j)] / g;
}

double EdgeOperator::coefficient_y(int i, int j) const {
  const double g = (i == 0 || i == grid_.n - 1) ? 0.5 : 1.0;
  return wy_[grid_.index(i, j)] / g;
}

void EdgeOperator::apply(std::span<const double> x, std::span<double> y) const {
  const int n = grid_.n;
  const double* wx = wx_.data();
  const double* wy = wy_.data();
  const double* dg = diag_.data();
  auto edge_row = [&](int j) {
    for (int i = 0; i < n; ++i) {
      const std::size_t p = grid_.index(i, j);
      double s = dg[p] * x[p];
      if (i > 0) s -= wx[p - 1] * x[p - 1];
      if (i < n - 1) s -= wx[p] * x[p + 1];
      if (j > 0) s -= wy[p - n] * x[p - n];
      if (j < n - 1) s -= wy[p] * x[p + n];
      y[p] = s;
    }
  };
  edge_row(0);
  for (int j = 1; j < n - 1; ++j) {
    const std::size_t row = std::size_t(j) * n;
    {
      const std::size_t p = row;
      y[p] = dg[p] * x[p] - wx[p] * x[p + 1] - wy[p - n] * x[p - n] - wy[p] * x[p + n];
    }
    for (std::size_t p = row + 1; p < row + n - 1; ++p)
      y[p] = dg[p] * x[p] - wx[p - 1] * x[p - 1] - wx[p] * x[p + 1] - wy[p - n] * x[p - n] - wy[p] * x[p + n];
    {
      const std::size_t p = row + n - 1;
      y[p] = dg[p] * x[p] - wx[p - 1] * x[p - 1] - wy[p - n] * x[p - n] - wy[p] * x[p + n];
    }
  }
  if (n > 1) edge_row(n - 1);
}

double EdgeOperator::bilinear(std::span<const double> u, std::span<const double> v) const {
  const int n = grid_.n;
  double s = 0.0;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const std::size_t p = grid_.index(i, j);
      if (i < n - 1) s += wx_[p] * (u[p + 1] - u[p]) * (v[p + 1] - v[p]);
      if (j < n - 1) s += wy_[p] * (u[p + n] - u[p]) * (v[p + n] - v[p]);
    }
  }
  return s;
}

std::vector<double> EdgeOperator::energy_by_region(std::span<const double> u, const RegionFn& label,
                                                   int regions) const {
  std::vector<double> out(std::size_t(std::max(regions, 0)), 0.0);
  const int n = grid_.n;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const std::size_t p = grid_.index(i, j);
      if (i < n - 1) {
        const int r = label(grid_.mid_x(i, j));
        const double du = u[p + 1] - u[p];
        if (r >= 0 && r < regions) out[r] += wx_[p] * du * du;
      }
      if (j < n - 1) {
        const int r = label(grid_.mid_y(i, j));
        const double du = u[p + n] - u[p];
        if (r >= 0 && r < regions) out[r] += wy_[p] * du * du;
      }
    }
  }
  return out;
}

std::string to_string(Preconditioner p) {
  switch (p) {
    case Preconditioner::jacobi: return "jacobi";
    case Preconditioner::multigrid: return "multigrid";
    case Preconditioner::automatic: return "auto";
  }
  return "auto";
}

Preconditioner preconditioner_from_string(const std::string& s) {
  if (s == "jacobi") return Preconditioner::jacobi;
  if (s == "multigrid" || s == "mg") return Preconditioner::multigrid;
  if (s == "auto" || s == "automatic") return Preconditioner::automatic;
  throw std::invalid_argument("unknown preconditioner: " + s);
}

SolveResult solve(const EdgeOperator& op, GridField field, const SolverOptions& options) {
  const Grid& g = op.grid();
  if (!field.grid.same_lattice(g) || field.values.size() != g.size() || field.fixed.size() != g.size())
    throw std::invalid_argument("field and operator live on different grids");

  const std::size_t total = g.size();
  const std::size_t nfixed = field.fixed_count();
  if (nfixed == 0) throw SolverError("singular system: no fixed nodes", 0, 0.0);

  SolveStats stats;
  if (nfixed == total) return {std::move(field), stats};

  const auto& fixed = field.fixed;
  auto mask = [&](std::vector<double>& v) {
    for (std::size_t p = 0; p < total; ++p)
      if (fixed[p]) v[p] = 0.0;
  };

  std::vector<double>& u = field.values;
  std::vector<double> r(total), z(total), pdir(total), q(total);

  // Forcing of the constrained problem: -(L u_fixed) on free nodes.
  for (std::size_t p = 0; p < total; ++p) z[p] = fixed[p] ? u[p] : 0.0;
  op.apply(z, q);
  mask(q);
  double bnorm = std::sqrt(dot(q, q));

  auto residual = [&]() {
    op.apply(u, r);
    for (std::size_t p = 0; p < total; ++p) r[p] = fixed[p] ? 0.0 : -r[p];
    return std::sqrt(dot(r, r));
  };
  double rnorm = residual();
  if (bnorm == 0.0) {
    if (rnorm == 0.0) return {std::move(field), stats};
    bnorm = rnorm;
  }

  std::optional<MultigridPreconditioner> mg;
  Preconditioner used = Preconditioner::jacobi;
  if (options.preconditioner != Preconditioner::jacobi) {
    mg.emplace(op, fixed);
    if (mg->usable()) {
      used = Preconditioner::multigrid;
    } else {
      if (options.preconditioner == Preconditioner::multigrid)
        throw std::invalid_argument("multigrid preconditioner unavailable for this grid size");
      mg.reset();
    }
  }
  stats.used = used;
  stats.levels = mg ? mg->levels() : 1;

  std::vector<double> inv_diag(total, 0.0);
  if (!mg) {
    const auto d = op.diagonal();
    for (std::size_t p = 0; p < total; ++p) inv_diag[p] = (fixed[p] || d[p] == 0.0) ? 0.0 : 1.0 / d[p];
  }
  auto precondition = [&]() {
    if (mg) {
      mg->apply(r, z);
      mask(z);
    } else {
      for (std::size_t p = 0; p < total; ++p) z[p] = inv_diag[p] * r[p];
    }
  };

  const int max_it = options.max_iterations > 0 ? options.max_iterations : (mg ? 500 : 50 * g.n);
  const double target = options.tolerance * bnorm;
  int it = 0;

  // CG with a true-residual check at convergence; restarts if the recursive
  // residual drifted below the target while the true one did not.
  while (rnorm > target && it < max_it) {
    precondition();
    pdir = z;
    double rz = dot(r, z);
    while (it < max_it) {
      op.apply(pdir, q);
      mask(q);
      const double pq = dot(pdir, q);
      if (!(pq > 0.0)) break;
      const double step = rz / pq;
      for (std::size_t p = 0; p < total; ++p) {
        u[p] += step * pdir[p];
        r[p] -= step * q[p];
      }
      ++it;
      if (std::sqrt(dot(r, r)) <= target) break;
      precondition();
      const double rz_new = dot(r, z);
      const double beta = rz_new / rz;
      rz = rz_new;
      for (std::size_t p = 0; p < total; ++p) pdir[p] = z[p] + beta * pdir[p];
    }
    const double previous = rnorm;
    rnorm = residual();
    if (rnorm > target && rnorm >= previous) break;
  }

  stats.iterations = it;
  stats.relative_residual = rnorm / bnorm;
  if (rnorm > target)
    throw SolverError("conjugate gradients did not reach tolerance", it, stats.relative_residual);
  return {std::move(field), stats};
}

double energy(const GridField& field, const EdgeOperator& op) {
  if (!field.grid.same_lattice(op.grid())) throw std::invalid_argument("field and operator grids differ");
  return op.energy(field.values);
}

void dump_field(const GridField& field, const std::string& prefix,
                const std::vector<std::pair<std::string, double>>& extra) {
  {
    std::ofstream bin(prefix + ".bin", std::ios::binary);
    if (!bin) throw std::runtime_error("cannot write " + prefix + ".bin");
    bin.write(reinterpret_cast<const char*>(field.values.data()),
              std::streamsize(field.values.size() * sizeof(double)));
  }
  std::ofstream hdr(prefix + ".txt");
  if (!hdr) throw std::runtime_error("cannot write " + prefix + ".txt");
  hdr.precision(17);
  hdr << "n " << field.grid.n << "\n"
      << "h " << field.grid.h << "\n"
      << "x0 " << field.grid.x(0) << "\n"
      << "y0 " << field.grid.y(0) << "\n";
  for (const auto& [k, v] : extra) hdr << k << " " << v << "\n";
}

}  // namespace twocap
