#pragma once

// Closed-form capacity constants and limit laws. Everything here is a pure
// function of its arguments and safe to call concurrently.

namespace twocap {

inline constexpr double kPi = 3.14159265358979323846;

/// Inputs of the harmonic-mean limit law: the essential infimum of the
/// coefficient, the square root of det A_hom, and the scale ratio lambda.
struct LimitInputs {
  double alpha_min = 1.0;
  double sqrt_det_hom = 1.0;
  double lambda = 0.0;

  /// Throws std::invalid_argument unless alpha_min > 0,
  /// sqrt_det_hom >= alpha_min and lambda in [0, 1].
  void validate() const;
};

/// Minimal Dirichlet energy of the constant-coefficient annulus problem,
/// 2 pi c / log(R / r).
double annulus_capacity_exact(double outer_radius, double inner_radius, double coefficient);

/// 2 pi alpha b / (lambda alpha + (1 - lambda) b), b = sqrt(det A_hom).
double harmonic_limit(const LimitInputs& in);

/// Harmonic limit for the alpha/beta checkerboard, where sqrt(det A_hom) =
/// sqrt(alpha beta). Requires 0 < alpha <= beta.
double checkerboard_limit(double alpha, double beta, double lambda);

/// Hard-core Ginzburg-Landau vortex limit 2 pi (lambda b + (1 - lambda) alpha).
double gl_arithmetic_limit(const LimitInputs& in);

/// Boundary value c minimising the two-term split energy
/// 2 pi alpha (1-c)^2 / (1-lambda) + 2 pi sqrt(alpha beta) c^2 / lambda.
double optimal_boundary_value(double alpha, double beta, double lambda);

/// The two-term split energy above. At lambda = 0 (resp. 1) the singular
/// term is dropped when c = 0 (resp. c = 1) and is +inf otherwise.
double split_energy(double alpha, double beta, double lambda, double c);

/// Number of dyadic annuli max{n : eps^lambda1 2^n <= outer_radius}, i.e.
/// floor((lambda1 |log eps| + log outer_radius) / log 2). Throws when no
/// n >= 0 qualifies.
int dyadic_scale_count(double epsilon, double lambda1, double outer_radius);

}  // namespace twocap
