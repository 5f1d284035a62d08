#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "twocap/elliptic.hpp"
#include "twocap/multigrid.hpp"

using namespace twocap;

TEST_CASE("friendly sizes") {
  CHECK(multigrid_friendly_size(33) == 33);
  CHECK(multigrid_friendly_size(65) == 65);
  CHECK(multigrid_friendly_size(66) == 67);
  CHECK(multigrid_friendly_size(1025) == 1025);
  CHECK(multigrid_friendly_size(3079) == 3137);
  for (int n = 3; n < 5000; n += 7) {
    const int m = multigrid_friendly_size(n);
    CHECK(m >= n);
    int k = m - 1;
    while (k > 64 && k % 2 == 0) k /= 2;
    CHECK(k <= 64);
  }
}

TEST_CASE("the V-cycle is a symmetric positive definite preconditioner") {
  const Grid g = Grid::centred(32, 1.0 / 64);
  const auto op = EdgeOperator::assemble(g, Checkerboard(1.0, 9.0, 0.125, {0.3, 0.1}));
  GridField f(g);
  f.fix(32, 32, 1.0);
  f.fix_boundary(0.0);
  const MultigridPreconditioner mg(op, f.fixed);
  REQUIRE(mg.usable());
  CHECK(mg.levels() >= 2);

  std::mt19937_64 rng(9);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> a(g.size()), b(g.size()), Ma(g.size()), Mb(g.size());
    for (std::size_t p = 0; p < g.size(); ++p) {
      a[p] = f.fixed[p] ? 0.0 : nd(rng);
      b[p] = f.fixed[p] ? 0.0 : nd(rng);
    }
    mg.apply(a, Ma);
    mg.apply(b, Mb);
    double bMa = 0.0, aMb = 0.0, aMa = 0.0;
    for (std::size_t p = 0; p < g.size(); ++p) {
      if (f.fixed[p]) continue;
      bMa += b[p] * Ma[p];
      aMb += a[p] * Mb[p];
      aMa += a[p] * Ma[p];
    }
    CHECK(bMa == doctest::Approx(aMb).epsilon(1e-10));
    CHECK(aMa > 0.0);
  }
}

TEST_CASE("multigrid iteration counts stay flat under refinement") {
  int previous = 0;
  for (int half : {64, 128, 256}) {
    const Grid g = Grid::centred(half, 1.0 / half);
    const Checkerboard m(1.0, 4.0, 0.25);
    const auto op = EdgeOperator::assemble(g, m);
    GridField f(g);
    for (int j = 0; j < g.n; ++j)
      for (int i = 0; i < g.n; ++i)
        if (norm(g.node(i, j) - Vec2{0.0625, 0.0625}) <= 0.1) f.fix(i, j, 1.0);
    f.fix_boundary(0.0);
    SolverOptions o;
    o.preconditioner = Preconditioner::multigrid;
    const auto r = solve(op, f, o);
    CHECK(r.stats.iterations <= 25);
    if (previous) CHECK(r.stats.iterations <= previous + 4);
    previous = r.stats.iterations;
  }
}

TEST_CASE("unfriendly sizes fall back to jacobi under the automatic choice") {
  // n = 271 coarsens once to 136, which is even-sized and too large for the direct solve
  const Grid g = Grid::centred(135, 1.0 / 135);
  const auto op = EdgeOperator::assemble(g, Checkerboard::uniform(1.0));
  GridField f(g);
  f.fix(135, 135, 1.0);
  f.fix_boundary(0.0);
  const MultigridPreconditioner mg(op, f.fixed);
  CHECK_FALSE(mg.usable());
  const auto r = solve(op, f);
  CHECK(r.stats.used == Preconditioner::jacobi);
  SolverOptions o;
  o.preconditioner = Preconditioner::multigrid;
  CHECK_THROWS_AS(solve(op, f, o), std::invalid_argument);
}
