#include "twocap/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "twocap/errors.hpp"
#include "twocap/formulas.hpp"
#include "twocap/multigrid.hpp"

namespace twocap {

namespace {

constexpr double kRel = 1e-12;

double boundary_distance(const Grid& g, Vec2 z) {
  return std::min({z.x - g.x(0), g.x(g.n - 1) - z.x, z.y - g.y(0), g.y(g.n - 1) - z.y});
}

enum : std::uint8_t { kDisc, kCore, kShell, kOutside };

}  // namespace

std::string to_string(BoundaryValuePolicy p) {
  return p == BoundaryValuePolicy::discrete_optimal ? "discrete_optimal" : "from_schedule";
}

BoundaryValuePolicy boundary_value_policy_from_string(const std::string& s) {
  if (s == "from_schedule") return BoundaryValuePolicy::from_schedule;
  if (s == "discrete_optimal") return BoundaryValuePolicy::discrete_optimal;
  throw std::invalid_argument("unknown boundary value policy: " + s);
}

ProfileSpec ProfileSpec::make(double epsilon, double delta, double lambda, double alpha, double beta, Vec2 z,
                              const Grid& grid, const Options& options) {
  if (!(epsilon > 0.0) || !(epsilon < 1.0)) throw std::invalid_argument("profile needs 0 < eps < 1");
  if (!(lambda > 0.0) || lambda > 1.0) throw std::invalid_argument("profile needs 0 < lambda <= 1");
  ProfileSpec s;
  s.epsilon = epsilon;
  s.delta = delta;
  s.lambda = lambda;
  s.alpha = alpha;
  s.beta = beta;
  s.z = z;
  s.guard_ratio = options.guard_ratio;
  s.c_policy = options.c_policy;
  s.c = optimal_boundary_value(alpha, beta, lambda);

  double l1 = options.lambda1;
  if (l1 <= 0.0) l1 = lambda - 0.05 > 0.0 ? lambda - 0.05 : 0.5 * lambda;
  s.R0 = options.R0 > 0.0 ? options.R0 : std::min(0.99, boundary_distance(grid, z) - 2.0 * grid.h);
  if (!(s.R0 > 0.0)) throw std::invalid_argument("profile centre too close to the lattice boundary");
  s.T = dyadic_scale_count(epsilon, l1, s.R0);
  // eps^lambda1 2^T = R0 exactly; this only lowers lambda1.
  s.lambda1 = std::log(s.R0 / std::ldexp(1.0, s.T)) / std::log(epsilon);
  s.lambda2 = 0.5 * (s.lambda1 + 1.0);
  return s;
}

double ProfileSpec::core_radius() const { return std::ldexp(R0, -T); }

double ProfileSpec::shell_radius(int k) const { return std::ldexp(R0, k - T); }

void ProfileSpec::validate(const Grid& grid) const {
  if (T < 2) throw std::invalid_argument("profile needs at least two dyadic shells");
  if (!(c >= 0.0 && c <= 1.0)) throw std::invalid_argument("profile boundary value outside [0, 1]");
  if (!(lambda1 > 0.0) || lambda1 >= lambda * (1.0 + kRel))
    throw std::invalid_argument("profile needs 0 < lambda1 < lambda");
  const double rho0 = core_radius();
  if (alpha != beta && delta > guard_ratio * rho0 * (1.0 + kRel))
    throw std::invalid_argument("period too coarse for the shells: delta > guard * eps^lambda1");
  const double h = grid.h;
  if (rho0 - h - epsilon < 4.0 * h * (1.0 - kRel)) throw ResolutionError("profile core thinner than 4h");
  if (rho0 - 2.0 * h < 4.0 * h * (1.0 - kRel)) throw ResolutionError("profile shell thinner than 4h");
  if (R0 + 2.0 * h > boundary_distance(grid, z) * (1.0 + kRel))
    throw std::invalid_argument("profile support reaches the lattice boundary");
}

GridField build_profile_lambda0(const Grid& grid, double epsilon, double delta, Vec2 z) {
  if (!(epsilon > 0.0) || !(delta > epsilon)) throw std::invalid_argument("lambda = 0 profile needs 0 < eps < delta");
  if (delta >= boundary_distance(grid, z)) throw std::invalid_argument("B_delta(z) must lie inside the lattice");
  GridField f = capacity_constraints(grid, z, epsilon);
  const double span = std::log(delta / epsilon);
  for (int j = 0; j < grid.n; ++j)
    for (int i = 0; i < grid.n; ++i) {
      const std::size_t p = grid.index(i, j);
      if (f.fixed[p]) continue;
      const double rho = norm(grid.node(i, j) - z);
      f.values[p] = rho >= delta ? 0.0 : 1.0 - std::log(rho / epsilon) / span;
    }
  return f;
}

ProfileResult build_profile(const ProfileSpec& spec, const Checkerboard& medium, const Grid& grid,
                            const SolverOptions& solver) {
  spec.validate(grid);
  if (medium.alpha() != spec.alpha || medium.beta() != spec.beta ||
      (!medium.is_uniform() && medium.delta() != spec.delta))
    throw std::invalid_argument("medium does not match the profile spec");

  const double h = grid.h;
  const double eps = spec.epsilon;
  const double rho0 = spec.core_radius();
  const int T = spec.T;
  const Vec2 z = spec.z;
  const std::size_t N = grid.size();

  // Per node: region code and the c-independent shape value s, so that the
  // field is 1 (disc), 1 - (1 - c) s (core), c s (shells), 0 (outside).
  std::vector<std::uint8_t> code(N, kOutside);
  std::vector<double> s(N, 0.0);
  const double core_span = std::log((rho0 - h) / eps);
  const double eps2 = eps * eps * (1.0 + kRel);
  for (int j = 0; j < grid.n; ++j)
    for (int i = 0; i < grid.n; ++i) {
      const std::size_t p = grid.index(i, j);
      const Vec2 d = grid.node(i, j) - z;
      const double q = d.x * d.x + d.y * d.y;
      if (q <= eps2) {
        code[p] = kDisc;
        continue;
      }
      const double rho = std::sqrt(q);
      if (rho < rho0 - h) {
        code[p] = kCore;
        s[p] = std::log(rho / eps) / core_span;
      } else if (rho <= rho0) {
        code[p] = kShell;
        s[p] = 1.0;
      }
    }

  ProfileResult res;
  const int iz = grid.nearest_i(z.x);
  const int jz = grid.nearest_j(z.y);
  for (int k = 1; k <= T; ++k) {
    const double inner = spec.shell_radius(k - 1);
    const double outer = spec.shell_radius(k);
    const int half = int(std::ceil(outer / h)) + 2;
    const int nw = multigrid_friendly_size(2 * half + 1);
    const int hw = (nw - 1) / 2;
    const Grid win = grid.window(iz - hw, jz - hw, nw);
    const EdgeOperator op = EdgeOperator::assemble(win, medium);
    const SolveResult w = annulus_field(op, z, inner + h, outer - h, 1.0, 0.0, solver);
    res.solver_iterations += w.stats.iterations;

    const double in2 = inner * inner;
    const double out2 = outer * outer;
    for (int j = std::max(0, jz - hw); j <= std::min(grid.n - 1, jz + hw); ++j)
      for (int i = std::max(0, iz - hw); i <= std::min(grid.n - 1, iz + hw); ++i) {
        const Vec2 d = grid.node(i, j) - z;
        const double q = d.x * d.x + d.y * d.y;
        if (!(q > in2 && q <= out2)) continue;
        const std::size_t p = grid.index(i, j);
        code[p] = kShell;
        s[p] = (double(T - k) + w.field.at(i - (iz - hw), j - (jz - hw))) / double(T);
      }
  }

  const EdgeOperator op = EdgeOperator::assemble(grid, medium);
  auto assemble_field = [&](double c, std::vector<double>& u) {
    u.resize(N);
    for (std::size_t p = 0; p < N; ++p) {
      switch (code[p]) {
        case kDisc: u[p] = 1.0; break;
        case kCore: u[p] = 1.0 - (1.0 - c) * s[p]; break;
        case kShell: u[p] = c * s[p]; break;
        default: u[p] = 0.0;
      }
    }
  };

  double c = spec.c;
  if (spec.c_policy == BoundaryValuePolicy::discrete_optimal) {
    // u = U0 + c U1 with U0 = u(0) and U1 = u(1) - u(0).
    std::vector<double> u0, u1;
    assemble_field(0.0, u0);
    assemble_field(1.0, u1);
    for (std::size_t p = 0; p < N; ++p) u1[p] -= u0[p];
    const double b11 = op.bilinear(u1, u1);
    const double b01 = op.bilinear(u0, u1);
    c = b11 > 0.0 ? std::clamp(-b01 / b11, 0.0, 1.0) : spec.c;
  }
  res.c = c;

  res.field = capacity_constraints(grid, z, eps);
  assemble_field(c, res.field.values);
  for (std::size_t p = 0; p < N; ++p)
    if (res.field.fixed[p] && code[p] != kDisc) res.field.values[p] = 0.0;

  auto label = [&](Vec2 m) {
    const double rho = norm(m - z);
    if (rho < rho0) return 0;
    for (int k = 1; k <= T; ++k)
      if (rho < spec.shell_radius(k)) return k;
    return T + 1;
  };
  const auto parts = op.energy_by_region(res.field.values, label, T + 2);
  res.breakdown.emplace_back("inner", parts[0]);
  for (int k = 1; k <= T; ++k) res.breakdown.emplace_back("shell_" + std::to_string(k), parts[k]);
  res.breakdown.emplace_back("outside", parts[T + 1]);
  res.energy = 0.0;
  for (double e : parts) res.energy += e;

  const double core_log = std::log(rho0 / eps);
  res.inner_continuum = 2.0 * kPi * spec.alpha * (1.0 - c) * (1.0 - c) / core_log;
  const double rho2 = std::pow(eps, spec.lambda2);
  const double a_part = std::log(rho2 / eps);
  const double b_part = std::log(rho0 / rho2);
  res.inner_bound = 2.0 * kPi * (1.0 - c) * (1.0 - c) * (spec.alpha * a_part + spec.beta * b_part) /
                    (core_log * core_log);
  res.inner_bound_valid = medium.is_uniform() || rho2 <= medium.delta() / 4.0;
  res.shell_limit = 2.0 * kPi * std::sqrt(spec.alpha * spec.beta) / std::log(2.0) * c * c / double(T);
  return res;
}

bool admissible(const GridField& field, Vec2 z, double epsilon) {
  const GridField mask = capacity_constraints(field.grid, z, epsilon);
  for (std::size_t p = 0; p < mask.values.size(); ++p)
    if (mask.fixed[p] && field.values[p] != mask.values[p]) return false;
  return true;
}

UpperBoundReport upper_bound_report(const ProfileSpec& spec, const ProfileResult& profile,
                                    const CapacityResult& matched) {
  if (!matched.field) throw std::invalid_argument("capacity result carries no field");
  if (!matched.field->grid.same_lattice(profile.field.grid))
    throw std::invalid_argument("profile and capacity use different lattices");
  if (matched.meta.epsilon != spec.epsilon || !(matched.meta.center == spec.z))
    throw std::invalid_argument("profile and capacity use different constraint sets");
  if (matched.field->fixed != profile.field.fixed)
    throw std::invalid_argument("profile and capacity use different constraint masks");
  UpperBoundReport r;
  r.profile_energy = profile.energy;
  r.minimum = matched.energy;
  r.ratio = profile.energy / matched.energy;
  const double le = std::abs(std::log(spec.epsilon));
  r.scaled_profile = le * profile.energy;
  r.scaled_minimum = le * matched.energy;
  r.limit = checkerboard_limit(spec.alpha, spec.beta, spec.lambda);
  r.admissible = admissible(profile.field, spec.z, spec.epsilon);
  return r;
}

}  // namespace twocap
