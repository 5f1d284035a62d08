#pragma once

#include <stdexcept>
#include <string>

namespace twocap {

/// A length scale (checkerboard period, annulus width, inclusion radius) is
/// not resolved by enough grid spacings.
class ResolutionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Iterative solve stopped before reaching its tolerance, or the system has
/// no constraint pinning it down.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, int iterations, double residual)
      : std::runtime_error(what), iterations_(iterations), residual_(residual) {}
  int iterations() const { return iterations_; }
  double residual() const { return residual_; }

 private:
  int iterations_;
  double residual_;
};

}  // namespace twocap
