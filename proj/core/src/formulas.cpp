#include "twocap/formulas.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace twocap {

void LimitInputs::validate() const {
  if (!(alpha_min > 0.0)) throw std::invalid_argument("alpha_min must be positive");
  if (!(sqrt_det_hom >= alpha_min))
    throw std::invalid_argument("sqrt_det_hom must be at least alpha_min");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::invalid_argument("lambda must lie in [0, 1]");
}

double annulus_capacity_exact(double outer_radius, double inner_radius, double coefficient) {
  if (!(inner_radius > 0.0) || !(coefficient > 0.0))
    throw std::invalid_argument("annulus radii and coefficient must be positive");
  if (!(inner_radius < outer_radius))
    throw std::invalid_argument("annulus inner radius must be below the outer radius");
  return 2.0 * kPi * coefficient / std::log(outer_radius / inner_radius);
}

double harmonic_limit(const LimitInputs& in) {
  in.validate();
  const double a = in.alpha_min;
  const double b = in.sqrt_det_hom;
  return 2.0 * kPi * a * b / (in.lambda * a + (1.0 - in.lambda) * b);
}

double checkerboard_limit(double alpha, double beta, double lambda) {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  if (alpha > beta) throw std::invalid_argument("checkerboard requires alpha <= beta");
  return harmonic_limit({alpha, std::sqrt(alpha * beta), lambda});
}

double gl_arithmetic_limit(const LimitInputs& in) {
  in.validate();
  return 2.0 * kPi * (in.lambda * in.sqrt_det_hom + (1.0 - in.lambda) * in.alpha_min);
}

double optimal_boundary_value(double alpha, double beta, double lambda) {
  if (!(alpha > 0.0) || alpha > beta)
    throw std::invalid_argument("optimal_boundary_value requires 0 < alpha <= beta");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::invalid_argument("lambda must lie in [0, 1]");
  const double num = alpha * lambda;
  return num / (num + std::sqrt(alpha * beta) * (1.0 - lambda));
}

double split_energy(double alpha, double beta, double lambda, double c) {
  if (!(alpha > 0.0) || alpha > beta)
    throw std::invalid_argument("split_energy requires 0 < alpha <= beta");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::invalid_argument("lambda must lie in [0, 1]");
  constexpr double inf = std::numeric_limits<double>::infinity();
  const double inner_drop = (1.0 - c) * (1.0 - c);
  const double outer_drop = c * c;
  double inner = 0.0;
  if (lambda < 1.0)
    inner = 2.0 * kPi * alpha * inner_drop / (1.0 - lambda);
  else if (inner_drop != 0.0)
    inner = inf;
  double outer = 0.0;
  if (lambda > 0.0)
    outer = 2.0 * kPi * std::sqrt(alpha * beta) * outer_drop / lambda;
  else if (outer_drop != 0.0)
    outer = inf;
  return inner + outer;
}

int dyadic_scale_count(double epsilon, double lambda1, double outer_radius) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
  if (!(lambda1 > 0.0 && lambda1 <= 1.0)) throw std::invalid_argument("lambda1 must lie in (0, 1]");
  if (!(outer_radius > 0.0)) throw std::invalid_argument("outer radius must be positive");
  const double t = (lambda1 * std::abs(std::log(epsilon)) + std::log(outer_radius)) / std::log(2.0);
  // Near-integer values come from exact dyadic inputs; do not lose them to rounding.
  const double snapped = std::floor(t + 1e-9 * std::max(1.0, std::abs(t)));
  if (snapped < 0.0)
    throw std::domain_error("no dyadic scale fits: eps^lambda1 exceeds the outer radius (epsilon too large)");
  return static_cast<int>(snapped);
}

}  // namespace twocap
