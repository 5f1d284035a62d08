#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "twocap/medium.hpp"

using namespace twocap;

TEST_CASE("checkerboard sampling follows the half-open cells") {
  const Checkerboard m(1.0, 4.0, 1.0);
  CHECK(m.sample({0.25, 0.25}) == 1.0);
  CHECK(m.sample({0.75, 0.25}) == 4.0);
  CHECK(m.sample({0.25, 0.75}) == 4.0);
  CHECK(m.sample({0.75, 0.75}) == 1.0);
  CHECK(m.sample({1.25, 1.25}) == 1.0);
  CHECK(m.sample({-0.25, -0.25}) == 1.0);
  CHECK(m.sample({-0.25, 0.25}) == 4.0);

  SUBCASE("cell lines take the value of the cell that contains them") {
    CHECK(m.sample({0.0, 0.0}) == 1.0);
    CHECK(m.sample({0.5, 0.0}) == 4.0);
    CHECK(m.sample({0.5, 0.5}) == 1.0);
    CHECK(m.sample({0.0, 0.5}) == 4.0);
    // Rounding noise on a line does not flip the cell.
    CHECK(m.sample({0.5 - 1e-14, 0.1}) == 4.0);
  }
}

TEST_CASE("checkerboard invariants") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const Checkerboard m(1.0, 4.0, 0.37, {0.3, 0.8});

  SUBCASE("values and periodicity") {
    for (int k = 0; k < 2000; ++k) {
      const Vec2 p{u(rng), u(rng)};
      const double v = m.sample(p);
      CHECK((v == 1.0 || v == 4.0));
      CHECK(m.sample({p.x + 0.37, p.y}) == v);
      CHECK(m.sample({p.x, p.y + 0.37}) == v);
    }
  }
  SUBCASE("alpha occupies half of the period cell") {
    const int n = 1000;
    int hits = 0;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) hits += m.is_alpha({(i + 0.5) / n * 0.37, (j + 0.5) / n * 0.37});
    CHECK(std::abs(hits / double(n * n) - 0.5) <= 1e-3);
  }
  SUBCASE("tau is reduced modulo one") {
    const Checkerboard a(1.0, 4.0, 1.0, {1.3, -0.2});
    CHECK(a.tau().x == doctest::Approx(0.3));
    CHECK(a.tau().y == doctest::Approx(0.8));
    const Checkerboard b(1.0, 4.0, 1.0, {0.3, 0.8});
    for (int k = 0; k < 200; ++k) {
      const Vec2 p{u(rng), u(rng)};
      CHECK(a.sample(p) == b.sample(p));
    }
  }
  SUBCASE("constructor preconditions") {
    CHECK_THROWS_AS(Checkerboard(0.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(Checkerboard(4.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(Checkerboard(1.0, 4.0, 0.0), std::invalid_argument);
    CHECK(Checkerboard::uniform(2.0).sample({0.7, 0.1}) == 2.0);
  }
}

TEST_CASE("alpha half-cell centres") {
  const Checkerboard m(1.0, 4.0, 1.0);
  const Vec2 a = m.alpha_cell_center({0.0, 0.0});
  CHECK(a.x == doctest::Approx(0.25));
  CHECK(a.y == doctest::Approx(0.25));
  const Vec2 b = m.alpha_cell_center({0.6, 0.6});
  CHECK(b.x == doctest::Approx(0.75));
  CHECK(b.y == doctest::Approx(0.75));

  SUBCASE("the whole returned half-cell is alpha, for any offset and start point") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
      const double delta = 0.01 + 0.2 * u(rng);
      const Checkerboard c(1.0, 4.0, delta, {u(rng), u(rng)});
      const Vec2 near{u(rng) - 0.5, u(rng) - 0.5};
      const Vec2 z = c.alpha_cell_center(near);
      CHECK(norm(z - near) <= delta);
      for (int j = -4; j <= 4; ++j)
        for (int i = -4; i <= 4; ++i)
          CHECK(c.is_alpha({z.x + i / 4.0 * 0.2499 * delta, z.y + j / 4.0 * 0.2499 * delta}));
    }
  }
  SUBCASE("beta centres and corners") {
    const Checkerboard c(1.0, 4.0, 0.5);
    const Vec2 b2 = c.beta_cell_center({0.0, 0.0});
    CHECK_FALSE(c.is_alpha(b2));
    const Vec2 k = c.cell_corner({0.2, 0.3});
    CHECK(k.x == doctest::Approx(0.25));
    CHECK(k.y == doctest::Approx(0.25));
  }
}

TEST_CASE("scale schedules") {
  const double eps = std::ldexp(1.0, -8);
  CHECK(ScaleSchedule::power(0.5).lambda().value == 0.5);
  CHECK(ScaleSchedule::power(0.5).delta(eps) == doctest::Approx(std::ldexp(1.0, -4)));
  CHECK(ScaleSchedule::proportional(3.0).lambda().value == 1.0);
  CHECK(ScaleSchedule::proportional(3.0).delta(eps) == doctest::Approx(3.0 * eps));
  CHECK(ScaleSchedule::inverse_log().lambda().value == 0.0);
  CHECK(ScaleSchedule::inverse_log().delta(eps) == doctest::Approx(1.0 / (8.0 * std::log(2.0))));
  CHECK(ScaleSchedule::linear_times_log().lambda().value == 1.0);
  CHECK(ScaleSchedule::linear_times_log().delta(eps) == doctest::Approx(eps * 8.0 * std::log(2.0)));
  CHECK_FALSE(ScaleSchedule::power(0.3).lambda().estimate);

  SUBCASE("tables estimate lambda from the two smallest eps") {
    const auto t = ScaleSchedule::parse("table:0.01/0.5,0.0001/0.01,0.001/0.031622776601683794");
    const auto l = t.lambda();
    CHECK(l.estimate);
    CHECK(l.value == doctest::Approx(0.5));
    CHECK(t.delta(0.001) == doctest::Approx(0.031622776601683794));
    CHECK_THROWS_AS(t.delta(0.002), std::invalid_argument);
    CHECK_THROWS_AS(ScaleSchedule::table({{0.1, 0.2}}).lambda(), std::invalid_argument);
  }
  SUBCASE("parsing round-trips") {
    for (const char* s : {"power:0.25", "inverse_log", "linear_times_log", "proportional:2"}) {
      const auto a = ScaleSchedule::parse(s);
      CHECK(ScaleSchedule::parse(a.describe()).delta(0.01) == a.delta(0.01));
    }
    CHECK_THROWS_AS(ScaleSchedule::parse("power:1.5"), std::invalid_argument);
    CHECK_THROWS_AS(ScaleSchedule::parse("power:0.5x"), std::invalid_argument);
    CHECK_THROWS_AS(ScaleSchedule::parse("weird"), std::invalid_argument);
  }
}
