#pragma once

#include <string>
#include <utility>
#include <vector>

#include "twocap/geometry.hpp"

namespace twocap {

/// Periodic two-valued checkerboard a(x / delta + tau).
///
/// On the unit cell, alpha occupies [0,1/2)^2 and [1/2,1)^2 and beta the two
/// off-diagonal half-cells. Cells are half-open; a point on a cell line takes
/// the value of the cell whose half-open box contains it.
class Checkerboard {
 public:
  /// Requires 0 < alpha <= beta and delta > 0. tau is reduced modulo 1.
  Checkerboard(double alpha, double beta, double delta, Vec2 tau = {});

  /// Constant coefficient c (alpha = beta = c); the period is irrelevant.
  static Checkerboard uniform(double c);

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double delta() const { return delta_; }
  Vec2 tau() const { return tau_; }
  bool is_uniform() const { return alpha_ == beta_; }

  double sample(Vec2 p) const { return is_alpha(p) ? alpha_ : beta_; }
  bool is_alpha(Vec2 p) const;

  /// Centre of the alpha half-cell (side delta/2) nearest to `near`. Ties go
  /// to the half-cell containing `near`, then to the lowest half-cell index.
  Vec2 alpha_cell_center(Vec2 near) const;
  /// Same for the beta half-cells.
  Vec2 beta_cell_center(Vec2 near) const;
  /// Half-cell corner (a point where all four half-cells meet) nearest to `near`.
  Vec2 cell_corner(Vec2 near) const;

  /// Same medium with both values multiplied by t.
  Checkerboard scaled_values(double t) const;
  /// Same medium with the period multiplied by t (geometry rescaling).
  Checkerboard scaled_period(double t) const;

 private:
  Vec2 nearest_center(Vec2 near, bool alpha_cells) const;

  double alpha_;
  double beta_;
  double delta_;
  Vec2 tau_;
};

/// Half-cell index floor(2 s) of a coordinate s measured in periods. Values
/// within 1e-9 half-cells of a cell line snap onto it, so lattice points that
/// lie on cell lines in exact arithmetic follow the half-open convention.
long half_cell_index(double s);

/// Diagonal (alpha-type) half-cell test for half-cell indices (p, q).
inline bool diagonal_half_cell(long p, long q) { return ((p + q) % 2 + 2) % 2 == 0; }

/// The map eps -> delta_eps together with its scale ratio lambda.
class ScaleSchedule {
 public:
  enum class Kind { power, inverse_log, linear_times_log, proportional, table };

  static ScaleSchedule power(double eta);
  static ScaleSchedule inverse_log();
  static ScaleSchedule linear_times_log();
  static ScaleSchedule proportional(double c);
  static ScaleSchedule table(std::vector<std::pair<double, double>> eps_delta);

  /// Parses "power:0.5", "inverse_log", "linear_times_log", "proportional:2"
  /// or "table:eps/delta,eps/delta,...".
  static ScaleSchedule parse(const std::string& text);
  std::string describe() const;

  Kind kind() const { return kind_; }
  double parameter() const { return param_; }

  /// delta at eps; for tables eps must match an entry (relative 1e-12).
  double delta(double eps) const;

  struct Lambda {
    double value;
    bool estimate;  // true for tables: slope through the two smallest eps
  };
  Lambda lambda() const;

 private:
  ScaleSchedule(Kind k, double p) : kind_(k), param_(p) {}

  Kind kind_;
  double param_;
  std::vector<std::pair<double, double>> table_;
};

}  // namespace twocap
