#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "twocap/elliptic.hpp"

namespace twocap {

/// Geometric multigrid V-cycle used as a symmetric preconditioner for the
/// constrained edge Laplacian.
///
/// Vertex-centred coarsening keeps even-indexed nodes while (n - 1) stays
/// even. Coarse conductances combine the two fine edges of each coarse edge in
/// series and average the three parallel rows. Red-black Gauss-Seidel smooths
/// (red-black before, black-red after, so the cycle is symmetric), restriction
/// is the transpose of bilinear prolongation, and the coarsest level is
/// solved with a banded Cholesky factorisation. Fixed nodes carry zero
/// correction on every level.
class MultigridPreconditioner {
 public:
  MultigridPreconditioner(const EdgeOperator& op, std::span<const std::uint8_t> fixed,
                          int max_coarsest = 129);
  ~MultigridPreconditioner();
  MultigridPreconditioner(MultigridPreconditioner&&) noexcept;
  MultigridPreconditioner& operator=(MultigridPreconditioner&&) noexcept;

  /// False when coarsening stalls above max_coarsest nodes per side or the
  /// coarsest system is singular; apply() must not be used then.
  bool usable() const;
  int levels() const;

  /// z = M^{-1} r. Not thread-safe: uses internal work vectors.
  void apply(std::span<const double> r, std::span<double> z) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Smallest node count >= min_nodes of the form m 2^p + 1 with m <= 64, so
/// that coarsening reaches a direct-solvable level.
int multigrid_friendly_size(int min_nodes);

}  // namespace twocap
