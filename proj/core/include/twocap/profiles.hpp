#pragma once

#include <string>
#include <utility>
#include <vector>

#include "twocap/capacity.hpp"
#include "twocap/elliptic.hpp"
#include "twocap/geometry.hpp"
#include "twocap/medium.hpp"

namespace twocap {

enum class BoundaryValuePolicy {
  from_schedule,     ///< c = optimal_boundary_value(alpha, beta, lambda)
  discrete_optimal,  ///< c minimising the discrete energy of the assembled field
};

std::string to_string(BoundaryValuePolicy p);
BoundaryValuePolicy boundary_value_policy_from_string(const std::string& s);

/// Geometry of the log-core plus dyadic-shell profile around z.
///
/// The core is the radial log interpolation from 1 on B_eps(z) to c on the
/// circle rho_0 = eps^lambda1; shell k (k = 1..T) is the annulus between
/// rho_{k-1} and rho_k = rho_0 2^k, on which the field is
/// ((T - k) c + c w_k) / T with w_k the discrete oscillating annulus minimiser
/// (1 inside, 0 outside); rho_T = R0 and the field vanishes beyond.
struct ProfileSpec {
  double epsilon = 0.0;
  double delta = 0.0;
  double lambda = 0.0;   ///< scale ratio of the schedule
  double lambda1 = 0.0;  ///< core exponent, snapped so that eps^lambda1 2^T = R0
  double lambda2 = 0.0;  ///< intermediate exponent used by the analytic core bound
  double alpha = 1.0;
  double beta = 1.0;
  Vec2 z{};
  int T = 0;
  double c = 0.0;  ///< boundary value from the schedule's lambda
  double R0 = 0.0;
  double guard_ratio = 0.125;  ///< required delta <= guard_ratio * eps^lambda1
  BoundaryValuePolicy c_policy = BoundaryValuePolicy::from_schedule;

  struct Options {
    double lambda1 = -1.0;  ///< default lambda - 0.05 (lambda / 2 if that is not positive)
    double R0 = -1.0;       ///< default min(0.99, dist(z, lattice boundary) - 2h)
    double guard_ratio = 0.125;
    BoundaryValuePolicy c_policy = BoundaryValuePolicy::from_schedule;
  };

  /// Fills T, the snapped lambda1, lambda2 and c for a lattice. Requires
  /// 0 < lambda <= 1.
  static ProfileSpec make(double epsilon, double delta, double lambda, double alpha, double beta, Vec2 z,
                          const Grid& grid, const Options& options);
  static ProfileSpec make(double epsilon, double delta, double lambda, double alpha, double beta, Vec2 z,
                          const Grid& grid) {
    return make(epsilon, delta, lambda, alpha, beta, z, grid, Options{});
  }

  double core_radius() const;       ///< rho_0 = eps^lambda1
  double shell_radius(int k) const;  ///< rho_k

  /// Throws std::invalid_argument (T < 2, c outside [0,1], lambda1 out of
  /// range, guard violated) or ResolutionError (a region thinner than 4h).
  void validate(const Grid& grid) const;
};

struct ProfileResult {
  GridField field;  ///< fixed mask = the capacity constraint set
  double energy = 0.0;
  double c = 0.0;  ///< value actually used
  /// "inner", "shell_1".."shell_T", "outside"; sums to energy exactly.
  std::vector<std::pair<std::string, double>> breakdown;
  double inner_continuum = 0.0;  ///< 2 pi alpha (1-c)^2 / log(rho_0 / eps)
  double inner_bound = 0.0;      ///< alpha up to eps^lambda2, beta beyond
  bool inner_bound_valid = false;  ///< B_{eps^lambda2}(z) inside the alpha half-cell
  double shell_limit = 0.0;        ///< (2 pi sqrt(alpha beta) / log 2) c^2 / T
  int solver_iterations = 0;
};

/// Radial log profile 1 - log(|x-z| / eps) / log(delta / eps) between eps and
/// delta, 1 inside, 0 outside. Requires eps < delta and B_delta(z) strictly
/// inside the lattice.
GridField build_profile_lambda0(const Grid& grid, double epsilon, double delta, Vec2 z);

ProfileResult build_profile(const ProfileSpec& spec, const Checkerboard& medium, const Grid& grid,
                            const SolverOptions& solver = {});

/// True when the field is 1 on every node of the closed disc B_eps(z) and 0
/// on the lattice boundary.
bool admissible(const GridField& field, Vec2 z, double epsilon);

struct UpperBoundReport {
  double profile_energy = 0.0;
  double minimum = 0.0;
  double ratio = 0.0;
  double scaled_profile = 0.0;
  double scaled_minimum = 0.0;
  double limit = 0.0;
  bool admissible = false;
};

/// Compares a profile with the capacity minimiser computed on the same
/// lattice and constraint set (the capacity result must carry its field).
/// Throws std::invalid_argument on any mismatch.
UpperBoundReport upper_bound_report(const ProfileSpec& spec, const ProfileResult& profile,
                                    const CapacityResult& matched);

}  // namespace twocap
