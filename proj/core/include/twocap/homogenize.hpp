#pragma once

#include <utility>
#include <vector>

#include "twocap/geometry.hpp"

namespace twocap {

/// Symmetric 2x2 effective conductivity.
struct EffectiveTensor {
  double a11 = 0.0;
  double a12 = 0.0;
  double a22 = 0.0;
  double sqrt_det = 0.0;
  int resolution = 0;
  int iterations = 0;  ///< total corrector iterations

  double min_eigenvalue() const;
  double max_eigenvalue() const;
};

/// Effective tensor of the alpha/beta checkerboard from the two periodic
/// corrector problems on the unit cell, discretised on resolution x
/// resolution nodes with the same edge-midpoint sampling as the capacity
/// solver. Requires an even resolution >= 16 (alpha/beta need not be
/// ordered: swapping them gives the dual medium).
EffectiveTensor cell_problem(double alpha, double beta, int resolution, double tolerance = 1e-11);

struct UniformityRow {
  double eta = 0.0;
  Vec2 tau{};
  double energy = 0.0;
  double deviation = 0.0;  ///< |energy - target| / target
};

struct UniformityReport {
  double target = 0.0;  ///< 2 pi sqrt(alpha beta) / log 2
  std::vector<UniformityRow> rows;
  std::vector<std::pair<double, double>> max_deviation;  ///< (eta, max over tau)
};

/// Oscillating annulus problem on B_1 \ B_{1/2} (data 1 inside, 0 outside)
/// with period eta and offset tau, solved on h = eta / points_per_period.
UniformityReport uniformity_probe(double alpha, double beta, const std::vector<double>& etas,
                                  const std::vector<Vec2>& taus, int points_per_period = 8);

}  // namespace twocap
