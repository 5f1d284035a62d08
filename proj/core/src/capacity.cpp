#include "twocap/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "twocap/errors.hpp"
#include "twocap/multigrid.hpp"

namespace twocap {

namespace {

constexpr double kRel = 1e-12;

Grid lattice(double half_width, double h, bool pad, Vec2 centre = {}) {
  const int half = int(std::ceil(half_width / h * (1.0 - kRel)));
  int n = 2 * half + 1;
  if (pad) n = multigrid_friendly_size(n);
  return Grid::centred((n - 1) / 2, h, centre);
}

CapacityResult solve_at(const GridProblem& problem, const Checkerboard& medium, const EdgeOperator& op,
                        Vec2 z, const CapacityOptions& options) {
  const Grid& g = op.grid();
  GridField init = capacity_constraints(g, z, problem.radius);
  SolveResult sol = solve(op, std::move(init), options.solver);

  const double inner = std::sqrt(problem.radius);
  auto label = [&](Vec2 p) { return norm(p - z) < inner ? 0 : 1; };
  const auto parts = op.energy_by_region(sol.field.values, label, 2);

  CapacityResult out;
  out.energy = parts[0] + parts[1];
  out.stats = sol.stats;
  out.breakdown = {{"inside_sqrt_eps", parts[0]}, {"outside_sqrt_eps", parts[1]}};
  out.meta.epsilon = problem.radius;
  out.meta.delta = medium.is_uniform() ? 0.0 : medium.delta();
  out.meta.lambda = options.lambda;
  out.meta.h = g.h;
  out.meta.n = g.n;
  out.meta.alpha = medium.alpha();
  out.meta.beta = medium.beta();
  out.meta.half_width = g.x(g.n - 1);
  out.meta.center = z;
  out.meta.center_policy = to_string(options.center_policy);
  if (options.keep_field) out.field = std::move(sol.field);
  return out;
}

}  // namespace

void GridProblem::validate() const {
  if (!(half_width > 0.0)) throw std::invalid_argument("half_width must be positive");
  if (!(spacing > 0.0)) throw std::invalid_argument("spacing must be positive");
  if (!(radius > 0.0)) throw std::invalid_argument("inclusion radius must be positive");
  if (radius < 3.0 * spacing * (1.0 - kRel)) throw ResolutionError("inclusion unresolved: eps < 3h");
  const double reach = std::max(std::abs(center.x), std::abs(center.y)) + radius;
  if (reach > 0.75 * half_width * (1.0 + kRel))
    throw std::invalid_argument("inclusion must keep a margin of L/4 from the boundary");
}

Grid GridProblem::grid() const { return lattice(half_width, spacing, pad_for_multigrid); }

std::string to_string(CenterPolicy p) {
  switch (p) {
    case CenterPolicy::given: return "given";
    case CenterPolicy::alpha_cell: return "alpha_cell";
    case CenterPolicy::search: return "search";
  }
  return "alpha_cell";
}

CenterPolicy center_policy_from_string(const std::string& s) {
  if (s == "given") return CenterPolicy::given;
  if (s == "alpha_cell") return CenterPolicy::alpha_cell;
  if (s == "search") return CenterPolicy::search;
  throw std::invalid_argument("unknown center policy: " + s);
}

GridField capacity_constraints(const Grid& grid, Vec2 center, double radius) {
  GridField f(grid);
  const double r2 = radius * radius * (1.0 + kRel);
  const int i0 = std::max(0, grid.nearest_i(center.x - radius) - 1);
  const int i1 = std::min(grid.n - 1, grid.nearest_i(center.x + radius) + 1);
  const int j0 = std::max(0, grid.nearest_j(center.y - radius) - 1);
  const int j1 = std::min(grid.n - 1, grid.nearest_j(center.y + radius) + 1);
  for (int j = j0; j <= j1; ++j)
    for (int i = i0; i <= i1; ++i) {
      const Vec2 d = grid.node(i, j) - center;
      if (d.x * d.x + d.y * d.y <= r2) f.fix(i, j, 1.0);
    }
  f.fix_boundary(0.0);
  return f;
}

CapacityResult solve_capacity(const GridProblem& problem, const Checkerboard& medium,
                              const CapacityOptions& options) {
  problem.validate();
  const Grid g = problem.grid();
  const EdgeOperator op = EdgeOperator::assemble(g, medium);

  auto checked = [&](Vec2 z) {
    GridProblem p = problem;
    p.center = z;
    p.validate();
    return z;
  };

  if (medium.is_uniform() || options.center_policy == CenterPolicy::given)
    return solve_at(problem, medium, op, checked(problem.center), options);

  const Vec2 za = checked(medium.alpha_cell_center(problem.center));
  if (options.center_policy == CenterPolicy::alpha_cell) return solve_at(problem, medium, op, za, options);

  CapacityResult best = solve_at(problem, medium, op, za, options);
  for (Vec2 z : {medium.beta_cell_center(problem.center), medium.cell_corner(problem.center)}) {
    CapacityResult r = solve_at(problem, medium, op, checked(z), options);
    if (r.energy < best.energy) best = std::move(r);
  }
  return best;
}

SolveResult annulus_field(const EdgeOperator& op, Vec2 center, double r_in, double r_out, double inner_value,
                          double outer_value, const SolverOptions& solver) {
  const Grid& grid = op.grid();
  GridField f(grid);
  const double in2 = r_in * r_in * (1.0 + kRel);
  const double out2 = r_out * r_out * (1.0 - kRel);
  for (int j = 0; j < grid.n; ++j)
    for (int i = 0; i < grid.n; ++i) {
      const Vec2 d = grid.node(i, j) - center;
      const double q = d.x * d.x + d.y * d.y;
      if (q <= in2)
        f.fix(i, j, inner_value);
      else if (q >= out2)
        f.fix(i, j, outer_value);
      else
        f.at(i, j) = outer_value;
    }
  f.fix_boundary(outer_value);
  return solve(op, std::move(f), solver);
}

CapacityResult solve_annulus(double outer_radius, double inner_radius, double inner_value, double outer_value,
                             const Checkerboard& medium, double h, const CapacityOptions& options, Vec2 center) {
  if (!(inner_radius > 0.0) || !(outer_radius > inner_radius))
    throw std::invalid_argument("annulus requires 0 < r < R");
  if (!(h > 0.0)) throw std::invalid_argument("spacing must be positive");
  if (inner_radius < 3.0 * h * (1.0 - kRel)) throw ResolutionError("annulus unresolved: r < 3h");

  const Grid g = lattice(outer_radius, h, true, center);
  const EdgeOperator op = EdgeOperator::assemble(g, medium);
  SolveResult sol = annulus_field(op, center, inner_radius, outer_radius, inner_value, outer_value, options.solver);

  CapacityResult out;
  out.energy = op.energy(sol.field.values);
  out.stats = sol.stats;
  out.breakdown = {{"annulus", out.energy}};
  out.meta.epsilon = inner_radius;
  out.meta.delta = medium.is_uniform() ? 0.0 : medium.delta();
  out.meta.lambda = options.lambda;
  out.meta.h = h;
  out.meta.n = g.n;
  out.meta.alpha = medium.alpha();
  out.meta.beta = medium.beta();
  out.meta.half_width = g.x(g.n - 1) - center.x;
  out.meta.center = center;
  out.meta.center_policy = to_string(CenterPolicy::given);
  if (options.keep_field) out.field = std::move(sol.field);
  return out;
}

double capacity_scaled(const CapacityResult& result) {
  const double eps = result.meta.epsilon;
  if (!(eps > 0.0) || !(eps < 1.0)) throw std::invalid_argument("scaled capacity needs 0 < eps < 1");
  return std::abs(std::log(eps)) * result.energy;
}

}  // namespace twocap
