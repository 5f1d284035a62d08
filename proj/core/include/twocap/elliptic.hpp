#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "twocap/geometry.hpp"
#include "twocap/medium.hpp"

namespace twocap {

/// Matrix-free edge-weighted graph Laplacian of the 5-point stencil.
///
/// The discrete energy is sum_e w_e (u_i - u_j)^2 with w_e = g_e a_e, where
/// a_e is the medium sampled at the edge midpoint and g_e = 1/2 for edges
/// running along the outer boundary of the lattice (they carry half a dual
/// cell) and 1 otherwise. The 2-D Dirichlet integral is scale invariant, so
/// no power of h appears.
class EdgeOperator {
 public:
  /// Throws ResolutionError when the lattice does not resolve the period
  /// (h > delta / 4) of a non-uniform medium.
  static EdgeOperator assemble(const Grid& grid, const Checkerboard& medium);

  /// Direct construction from edge weights (already including g_e). wx has
  /// an entry per node for the edge to its +x neighbour (zero on the last
  /// column), wy likewise for +y.
  static EdgeOperator from_weights(const Grid& grid, std::vector<double> wx, std::vector<double> wy);

  const Grid& grid() const { return grid_; }
  std::span<const double> wx() const { return wx_; }
  std::span<const double> wy() const { return wy_; }
  std::span<const double> diagonal() const { return diag_; }

  /// Medium value a_e of the edge (i,j)-(i+1,j), resp. (i,j)-(i,j+1).
  double coefficient_x(int i, int j) const;
  double coefficient_y(int i, int j) const;

  /// y = L x on every node (no constraint handling).
  void apply(std::span<const double> x, std::span<double> y) const;

  /// sum_e w_e (u_i - u_j)(v_i - v_j).
  double bilinear(std::span<const double> u, std::span<const double> v) const;
  double energy(std::span<const double> u) const { return bilinear(u, u); }

  /// Energy split by a region label of each edge midpoint. Labels outside
  /// [0, regions) are dropped.
  using RegionFn = std::function<int(Vec2)>;
  std::vector<double> energy_by_region(std::span<const double> u, const RegionFn& label, int regions) const;

 private:
  EdgeOperator(const Grid& g, std::vector<double> wx, std::vector<double> wy);

  Grid grid_;
  std::vector<double> wx_;
  std::vector<double> wy_;
  std::vector<double> diag_;
};

enum class Preconditioner { jacobi, multigrid, automatic };

std::string to_string(Preconditioner p);
Preconditioner preconditioner_from_string(const std::string& s);

struct SolverOptions {
  double tolerance = 1e-9;
  /// 0 selects 50 n for Jacobi and 500 for multigrid.
  int max_iterations = 0;
  Preconditioner preconditioner = Preconditioner::automatic;
};

struct SolveStats {
  int iterations = 0;
  double relative_residual = 0.0;
  Preconditioner used = Preconditioner::jacobi;
  int levels = 1;
};

struct SolveResult {
  GridField field;
  SolveStats stats;
};

/// Discrete energy minimiser among fields agreeing with `initial` on its
/// fixed nodes, by preconditioned conjugate gradients on the free nodes.
/// Free values of `initial` are the starting guess. Throws SolverError when
/// there are no fixed nodes or the tolerance is not met.
SolveResult solve(const EdgeOperator& op, GridField initial, const SolverOptions& options = {});

/// Total discrete energy of a field.
double energy(const GridField& field, const EdgeOperator& op);

/// Flat binary dump (row-major doubles, row = y index) plus a text header
/// `<prefix>.txt` with n, h, node (0,0) position and any extra key/values.
void dump_field(const GridField& field, const std::string& prefix,
                const std::vector<std::pair<std::string, double>>& extra = {});

}  // namespace twocap
