#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "twocap/elliptic.hpp"
#include "twocap/geometry.hpp"
#include "twocap/medium.hpp"

namespace twocap {

/// Square domain (-L, L)^2 around the origin with a disc inclusion B_eps(z).
struct GridProblem {
  double half_width = 1.0;
  double spacing = 1.0 / 64;
  Vec2 center{};
  double radius = 0.1;
  /// Grow the lattice to the next size the multigrid preconditioner can
  /// coarsen fully; the effective half-width is then slightly above L.
  bool pad_for_multigrid = true;

  /// Throws std::invalid_argument / ResolutionError unless h > 0,
  /// eps >= 3h and B_eps(z) keeps a margin of L/4 from the boundary.
  void validate() const;
  /// The lattice (odd node count, origin is a node).
  Grid grid() const;
};

enum class CenterPolicy {
  given,       ///< use GridProblem::center as is
  alpha_cell,  ///< centre of the alpha half-cell nearest to GridProblem::center
  search,      ///< minimum over the alpha centre, beta centre and cell corner
};

std::string to_string(CenterPolicy p);
CenterPolicy center_policy_from_string(const std::string& s);

struct CapacityMetadata {
  double epsilon = 0.0;
  double delta = 0.0;
  double lambda = -1.0;  ///< negative when unknown
  double h = 0.0;
  int n = 0;
  double alpha = 0.0;
  double beta = 0.0;
  double half_width = 0.0;  ///< effective half-width of the lattice
  Vec2 center{};
  std::string center_policy;
};

struct CapacityResult {
  double energy = 0.0;
  SolveStats stats;
  std::vector<std::pair<std::string, double>> breakdown;
  CapacityMetadata meta;
  std::optional<GridField> field;  ///< kept on request
};

struct CapacityOptions {
  SolverOptions solver{};
  CenterPolicy center_policy = CenterPolicy::alpha_cell;
  bool keep_field = false;
  double lambda = -1.0;  ///< recorded in the metadata only
};

/// Discrete two-capacity: minimal energy over fields equal to 1 on nodes of
/// the closed disc B_eps(z) and 0 on the lattice boundary. The breakdown
/// splits the energy into edges inside B_{sqrt(eps)}(z) and outside.
CapacityResult solve_capacity(const GridProblem& problem, const Checkerboard& medium,
                              const CapacityOptions& options = {});

/// Constraint mask and data of the capacity problem on a lattice.
GridField capacity_constraints(const Grid& grid, Vec2 center, double radius);

/// Discrete annulus problem on a lattice covering (-R, R)^2 around `center`:
/// nodes with |x - center| <= r take inner_value, nodes with |x - center| >= R
/// take outer_value. Requires h <= r / 3.
CapacityResult solve_annulus(double outer_radius, double inner_radius, double inner_value, double outer_value,
                             const Checkerboard& medium, double h, const CapacityOptions& options = {},
                             Vec2 center = {});

/// Annulus minimiser on an arbitrary lattice: nodes with distance <= r_in fix
/// to inner_value, >= r_out fix to outer_value, lattice boundary nodes fix to
/// outer_value as well.
SolveResult annulus_field(const EdgeOperator& op, Vec2 center, double r_in, double r_out,
                          double inner_value, double outer_value, const SolverOptions& solver = {});

/// |log eps| times the energy. Throws unless 0 < eps < 1.
double capacity_scaled(const CapacityResult& result);

}  // namespace twocap
