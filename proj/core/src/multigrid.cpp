#include "twocap/multigrid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace twocap {

namespace {

constexpr int kSmoothingSweeps = 2;
constexpr int kCoarsenBelow = 33;

struct Level {
  int n = 0;
  std::vector<double> wx, wy, diag;
  std::vector<std::uint8_t> fixed;
  std::vector<double> u, f, res;

  std::size_t at(int i, int j) const { return std::size_t(j) * std::size_t(n) + std::size_t(i); }
};

// Gauss-Seidel update of one colour: nodes with (i + j) % 2 == colour.
void relax_colour(const Level& L, const double* f, double* u, int colour) {
  const int n = L.n;
  const double* wx = L.wx.data();
  const double* wy = L.wy.data();
  const double* dg = L.diag.data();
  const std::uint8_t* fx = L.fixed.data();
  auto general = [&](int i, int j) {
    const std::size_t p = L.at(i, j);
    if (fx[p] || dg[p] == 0.0) return;
    double s = f[p];
    if (i > 0) s += wx[p - 1] * u[p - 1];
    if (i < n - 1) s += wx[p] * u[p + 1];
    if (j > 0) s += wy[p - n] * u[p - n];
    if (j < n - 1) s += wy[p] * u[p + n];
    u[p] = s / dg[p];
  };
  for (int j = 0; j < n; ++j) {
    const int start = (colour + j) & 1;
    if (j == 0 || j == n - 1) {
      for (int i = start; i < n; i += 2) general(i, j);
      continue;
    }
    int i = start;
    if (i == 0) {
      general(0, j);
      i = 2;
    }
    const std::size_t row = std::size_t(j) * n;
    for (; i < n - 1; i += 2) {
      const std::size_t p = row + i;
      if (fx[p]) continue;
      u[p] = (f[p] + wx[p - 1] * u[p - 1] + wx[p] * u[p + 1] + wy[p - n] * u[p - n] + wy[p] * u[p + n]) / dg[p];
    }
    if (i == n - 1) general(n - 1, j);
  }
}

// res = f - L u on free nodes, 0 on fixed ones.
void residual(const Level& L, const double* f, const double* u, double* res) {
  const int n = L.n;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const std::size_t p = L.at(i, j);
      if (L.fixed[p]) {
        res[p] = 0.0;
        continue;
      }
      double s = f[p] - L.diag[p] * u[p];
      if (i > 0) s += L.wx[p - 1] * u[p - 1];
      if (i < n - 1) s += L.wx[p] * u[p + 1];
      if (j > 0) s += L.wy[p - n] * u[p - n];
      if (j < n - 1) s += L.wy[p] * u[p + n];
      res[p] = s;
    }
  }
}

// Coarse edge conductance: each fine row contributes the series value of its
// two fine edges with weight 1/2 (off-line) or 1 (on-line). Boundary rows
// already carry half weights, which the sum preserves.
Level coarsen(const Level& F) {
  Level C;
  C.n = (F.n - 1) / 2 + 1;
  const int nc = C.n;
  const std::size_t sz = std::size_t(nc) * nc;
  C.wx.assign(sz, 0.0);
  C.wy.assign(sz, 0.0);
  C.diag.assign(sz, 0.0);
  C.fixed.assign(sz, 0);
  auto series = [](double a, double b) { return (a + b) > 0.0 ? a * b / (a + b) : 0.0; };
  for (int J = 0; J < nc; ++J) {
    for (int I = 0; I < nc; ++I) {
      const std::size_t pc = C.at(I, J);
      C.fixed[pc] = F.fixed[F.at(2 * I, 2 * J)];
      if (I < nc - 1) {
        double s = 0.0;
        for (int d = -1; d <= 1; ++d) {
          const int r = 2 * J + d;
          if (r < 0 || r >= F.n) continue;
          const double w = d == 0 ? 1.0 : 0.5;
          s += w * series(F.wx[F.at(2 * I, r)], F.wx[F.at(2 * I + 1, r)]);
        }
        C.wx[pc] = s;
      }
      if (J < nc - 1) {
        double s = 0.0;
        for (int d = -1; d <= 1; ++d) {
          const int c = 2 * I + d;
          if (c < 0 || c >= F.n) continue;
          const double w = d == 0 ? 1.0 : 0.5;
          s += w * series(F.wy[F.at(c, 2 * J)], F.wy[F.at(c, 2 * J + 1)]);
        }
        C.wy[pc] = s;
      }
    }
  }
  for (int J = 0; J < nc; ++J)
    for (int I = 0; I < nc; ++I) {
      const std::size_t p = C.at(I, J);
      double d = 0.0;
      if (I > 0) d += C.wx[p - 1];
      if (I < nc - 1) d += C.wx[p];
      if (J > 0) d += C.wy[p - nc];
      if (J < nc - 1) d += C.wy[p];
      C.diag[p] = d;
    }
  return C;
}

// Bilinear interpolation weights of fine node k relative to coarse node K:
// even k -> (K = k/2, 1); odd k -> (k/2, 1/2) and (k/2 + 1, 1/2).
void restrict_to(const Level& F, const double* rf, Level& C) {
  std::fill(C.f.begin(), C.f.end(), 0.0);
  const int n = F.n;
  for (int j = 0; j < n; ++j) {
    const int J = j >> 1;
    const bool jo = j & 1;
    for (int i = 0; i < n; ++i) {
      const double v = rf[F.at(i, j)];
      if (v == 0.0) continue;
      const int I = i >> 1;
      const bool io = i & 1;
      const double wi = io ? 0.5 : 1.0;
      const double wj = jo ? 0.5 : 1.0;
      C.f[C.at(I, J)] += wi * wj * v;
      if (io) C.f[C.at(I + 1, J)] += wi * wj * v;
      if (jo) C.f[C.at(I, J + 1)] += wi * wj * v;
      if (io && jo) C.f[C.at(I + 1, J + 1)] += wi * wj * v;
    }
  }
  for (std::size_t p = 0; p < C.f.size(); ++p)
    if (C.fixed[p]) C.f[p] = 0.0;
}

void prolong_add(const Level& C, const Level& F, double* uf) {
  const int n = F.n;
  const double* e = C.u.data();
  for (int j = 0; j < n; ++j) {
    const int J = j >> 1;
    const bool jo = j & 1;
    for (int i = 0; i < n; ++i) {
      const std::size_t p = F.at(i, j);
      if (F.fixed[p]) continue;
      const int I = i >> 1;
      const bool io = i & 1;
      double v = e[C.at(I, J)];
      if (io && jo)
        v = 0.25 * (v + e[C.at(I + 1, J)] + e[C.at(I, J + 1)] + e[C.at(I + 1, J + 1)]);
      else if (io)
        v = 0.5 * (v + e[C.at(I + 1, J)]);
      else if (jo)
        v = 0.5 * (v + e[C.at(I, J + 1)]);
      uf[p] += v;
    }
  }
}

// Banded Cholesky of the coarsest system (fixed rows replaced by identity).
struct BandCholesky {
  int N = 0;
  int b = 0;
  std::vector<double> band;  // band[p * (b + 1) + (p - q)] = L(p, q)

  double& L(int p, int q) { return band[std::size_t(p) * (b + 1) + std::size_t(p - q)]; }
  double L(int p, int q) const { return band[std::size_t(p) * (b + 1) + std::size_t(p - q)]; }

  bool factor(const Level& lv) {
    const int n = lv.n;
    N = n * n;
    b = n;
    band.assign(std::size_t(N) * (b + 1), 0.0);
    auto entry = [&](int p, int q) -> double {  // q <= p
      if (p == q) return lv.fixed[p] ? 1.0 : lv.diag[p];
      if (lv.fixed[p] || lv.fixed[q]) return 0.0;
      if (p - q == 1 && (p % n) != 0) return -lv.wx[q];
      if (p - q == n) return -lv.wy[q];
      return 0.0;
    };
    for (int p = 0; p < N; ++p) {
      const int lo = std::max(0, p - b);
      for (int q = lo; q <= p; ++q) {
        double s = entry(p, q);
        const int klo = std::max(lo, q - b);
        for (int k = klo; k < q; ++k) s -= L(p, k) * L(q, k);
        if (q == p) {
          if (!(s > 1e-300)) return false;
          L(p, p) = std::sqrt(s);
        } else {
          L(p, q) = s / L(q, q);
        }
      }
    }
    return true;
  }

  void solve(const std::vector<std::uint8_t>& fixed, const double* f, double* x) const {
    std::vector<double> y(N);
    for (int p = 0; p < N; ++p) {
      double s = fixed[p] ? 0.0 : f[p];
      for (int q = std::max(0, p - b); q < p; ++q) s -= L(p, q) * y[q];
      y[p] = s / L(p, p);
    }
    for (int p = N - 1; p >= 0; --p) {
      double s = y[p];
      for (int q = p + 1; q <= std::min(N - 1, p + b); ++q) s -= L(q, p) * x[q];
      x[p] = s / L(p, p);
    }
  }
};

}  // namespace

struct MultigridPreconditioner::Impl {
  std::vector<Level> levels;  // levels[0] is the fine level
  BandCholesky coarse;
  bool ok = false;

  void cycle(std::size_t k, const double* f, double* u) {
    Level& L = levels[k];
    if (k + 1 == levels.size()) {
      coarse.solve(L.fixed, f, u);
      return;
    }
    for (int s = 0; s < kSmoothingSweeps; ++s) {
      relax_colour(L, f, u, 0);
      relax_colour(L, f, u, 1);
    }
    residual(L, f, u, L.res.data());
    Level& C = levels[k + 1];
    restrict_to(L, L.res.data(), C);
    std::fill(C.u.begin(), C.u.end(), 0.0);
    cycle(k + 1, C.f.data(), C.u.data());
    prolong_add(C, L, u);
    for (int s = 0; s < kSmoothingSweeps; ++s) {
      relax_colour(L, f, u, 1);
      relax_colour(L, f, u, 0);
    }
  }
};

MultigridPreconditioner::MultigridPreconditioner(const EdgeOperator& op, std::span<const std::uint8_t> fixed,
                                                 int max_coarsest)
    : impl_(std::make_unique<Impl>()) {
  const Grid& g = op.grid();
  if (fixed.size() != g.size()) throw std::invalid_argument("fixed mask size mismatch");
  Level fine;
  fine.n = g.n;
  fine.wx.assign(op.wx().begin(), op.wx().end());
  fine.wy.assign(op.wy().begin(), op.wy().end());
  fine.diag.assign(op.diagonal().begin(), op.diagonal().end());
  fine.fixed.assign(fixed.begin(), fixed.end());
  fine.res.assign(g.size(), 0.0);
  impl_->levels.push_back(std::move(fine));
  while (impl_->levels.back().n > kCoarsenBelow && (impl_->levels.back().n - 1) % 2 == 0) {
    Level c = coarsen(impl_->levels.back());
    const std::size_t sz = std::size_t(c.n) * c.n;
    c.u.assign(sz, 0.0);
    c.f.assign(sz, 0.0);
    c.res.assign(sz, 0.0);
    impl_->levels.push_back(std::move(c));
  }
  const Level& last = impl_->levels.back();
  if (last.n > max_coarsest) return;
  impl_->ok = impl_->coarse.factor(last);
}

MultigridPreconditioner::~MultigridPreconditioner() = default;
MultigridPreconditioner::MultigridPreconditioner(MultigridPreconditioner&&) noexcept = default;
MultigridPreconditioner& MultigridPreconditioner::operator=(MultigridPreconditioner&&) noexcept = default;

bool MultigridPreconditioner::usable() const { return impl_ && impl_->ok; }

int MultigridPreconditioner::levels() const { return impl_ ? int(impl_->levels.size()) : 0; }

void MultigridPreconditioner::apply(std::span<const double> r, std::span<double> z) const {
  if (!usable()) throw std::logic_error("multigrid preconditioner is not usable");
  std::fill(z.begin(), z.end(), 0.0);
  impl_->cycle(0, r.data(), z.data());
}

int multigrid_friendly_size(int min_nodes) {
  if (min_nodes <= 2) return 2;
  long best = -1;
  for (int p = 0; p < 30; ++p) {
    const long step = 1L << p;
    const long m = (long(min_nodes) - 1 + step - 1) / step;
    if (m > 64) continue;
    const long cand = m * step + 1;
    if (best < 0 || cand < best) best = cand;
    if (m <= 1) break;
  }
  return int(best);
}

}  // namespace twocap
