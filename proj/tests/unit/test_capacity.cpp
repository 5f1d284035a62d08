#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracle_values.hpp"
#include "twocap/capacity.hpp"
#include "twocap/errors.hpp"
#include "twocap/formulas.hpp"

using namespace twocap;

namespace {

CapacityOptions tight(CenterPolicy policy = CenterPolicy::given) {
  CapacityOptions o;
  o.solver.tolerance = 1e-12;
  o.center_policy = policy;
  return o;
}

}  // namespace

TEST_CASE("agreement with the direct-solve oracle") {
  SUBCASE("disc capacity, checkerboard") {
    const GridProblem p{1.0, 1.0 / 16, {0.125, 0.125}, 3.0 / 16};
    const auto r = solve_capacity(p, Checkerboard(1.0, 4.0, 0.5), tight());
    CHECK(r.meta.n == 33);
    CHECK(r.energy == doctest::Approx(oracle::kCheckerboardCapacity33).epsilon(1e-9));
    // the given centre already is an alpha half-cell centre
    const auto ra = solve_capacity(p, Checkerboard(1.0, 4.0, 0.5), tight(CenterPolicy::alpha_cell));
    CHECK(ra.energy == doctest::Approx(r.energy).epsilon(1e-12));
  }
  SUBCASE("disc capacity, uniform") {
    const GridProblem p{1.0, 1.0 / 16, {}, 3.0 / 16};
    CHECK(solve_capacity(p, Checkerboard::uniform(1.0), tight()).energy ==
          doctest::Approx(oracle::kUniformCapacity33).epsilon(1e-9));
  }
  SUBCASE("annulus") {
    const auto u = solve_annulus(1.0, 0.25, 1.0, 0.0, Checkerboard::uniform(1.0), 1.0 / 32, tight());
    CHECK(u.meta.n == 65);
    CHECK(u.energy == doctest::Approx(oracle::kUniformAnnulus65).epsilon(1e-9));
    const auto c = solve_annulus(1.0, 0.25, 1.0, 0.0, Checkerboard(1.0, 4.0, 0.25), 1.0 / 32, tight());
    CHECK(c.energy == doctest::Approx(oracle::kCheckerboardAnnulus65).epsilon(1e-9));
  }
}

TEST_CASE("annulus against the closed form") {
  const auto r = solve_annulus(1.0, 0.5, 1.0, 0.0, Checkerboard::uniform(1.0), 1.0 / 128);
  CHECK(std::abs(r.energy - oracle::kTwoPiOverLog2) / oracle::kTwoPiOverLog2 <= 0.02);
  const auto r3 = solve_annulus(1.0, 0.5, 1.0, 0.0, Checkerboard::uniform(3.0), 1.0 / 128);
  CHECK(r3.energy == doctest::Approx(3.0 * r.energy).epsilon(1e-8));
  // boundary data enter quadratically
  const auto r2 = solve_annulus(1.0, 0.5, 3.0, 1.0, Checkerboard::uniform(1.0), 1.0 / 128);
  CHECK(r2.energy == doctest::Approx(4.0 * r.energy).epsilon(1e-8));
}

TEST_CASE("structural properties of the disc capacity") {
  const double h = 1.0 / 64;
  const Checkerboard cb(1.0, 4.0, 0.125);

  SUBCASE("alpha = beta reproduces the uniform medium bit for bit") {
    const GridProblem p{1.0, h, {0.1, -0.05}, 0.1};
    const auto a = solve_capacity(p, Checkerboard(2.0, 2.0, 0.125), tight(CenterPolicy::alpha_cell));
    const auto b = solve_capacity(p, Checkerboard::uniform(2.0), tight());
    CHECK(a.energy == b.energy);
  }
  SUBCASE("shrinking the disc lowers the capacity") {
    double previous = INFINITY;
    for (double eps : {0.25, 0.125, 0.0625}) {
      const auto r = solve_capacity({1.0, h, {}, eps}, cb, tight(CenterPolicy::alpha_cell));
      CHECK(r.energy < previous);
      previous = r.energy;
    }
  }
  SUBCASE("enlarging the domain lowers the capacity") {
    const auto small = solve_capacity({1.0, h, {}, 0.125}, cb, tight(CenterPolicy::alpha_cell));
    const auto large = solve_capacity({2.0, h, {}, 0.125}, cb, tight(CenterPolicy::alpha_cell));
    CHECK(large.energy < small.energy);
  }
  SUBCASE("bracketed by the uniform capacities with alpha and beta") {
    const GridProblem p{1.0, h, cb.alpha_cell_center({}), 0.125};
    const auto r = solve_capacity(p, cb, tight());
    const auto one = solve_capacity(p, Checkerboard::uniform(1.0), tight());
    CHECK(r.energy >= one.energy);
    CHECK(r.energy <= 4.0 * one.energy);
  }
  SUBCASE("invariant under a common power-of-two rescaling") {
    const auto a = solve_capacity({1.0, h, {}, 0.125}, cb, tight(CenterPolicy::alpha_cell));
    const auto b = solve_capacity({2.0, 2 * h, {}, 0.25}, cb.scaled_period(2.0), tight(CenterPolicy::alpha_cell));
    CHECK(a.meta.n == b.meta.n);
    CHECK(b.meta.center.x == 2.0 * a.meta.center.x);
    CHECK(b.energy == doctest::Approx(a.energy).epsilon(1e-9));
  }
  SUBCASE("centre search is never above the alpha-cell choice") {
    const GridProblem p{1.0, h, {}, 0.125};
    const auto a = solve_capacity(p, cb, tight(CenterPolicy::alpha_cell));
    const auto s = solve_capacity(p, cb, tight(CenterPolicy::search));
    CHECK(s.energy <= a.energy);
  }
  SUBCASE("energy breakdown and scaled value") {
    const auto r = solve_capacity({1.0, h, {}, 0.125}, cb);
    REQUIRE(r.breakdown.size() == 2);
    CHECK(r.breakdown[0].second + r.breakdown[1].second == doctest::Approx(r.energy).epsilon(1e-13));
    CHECK(capacity_scaled(r) == doctest::Approx(std::log(8.0) * r.energy));
    CHECK(r.meta.center_policy == "alpha_cell");
    CHECK_FALSE(r.field.has_value());
  }
}

TEST_CASE("input validation") {
  const Checkerboard cb(1.0, 4.0, 0.125);
  CHECK_THROWS_AS(solve_capacity({1.0, 1.0 / 16, {}, 0.1}, cb), ResolutionError);
  CHECK_THROWS_AS(solve_capacity({1.0, 1.0 / 64, {0.7, 0.0}, 0.1}, cb), std::invalid_argument);
  CHECK_THROWS_AS(solve_capacity({1.0, 1.0 / 16, {}, 0.25}, Checkerboard(1.0, 4.0, 0.05)), ResolutionError);
  CHECK_THROWS_AS(solve_annulus(1.0, 0.02, 1.0, 0.0, cb, 1.0 / 64), ResolutionError);
  CHECK_THROWS_AS(solve_annulus(0.5, 0.5, 1.0, 0.0, cb, 1.0 / 64), std::invalid_argument);
  CHECK(center_policy_from_string(to_string(CenterPolicy::search)) == CenterPolicy::search);
  CHECK_THROWS_AS(center_policy_from_string("middle"), std::invalid_argument);
}
