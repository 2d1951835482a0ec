#include <catch2/catch_amalgamated.hpp>

#include "ksteiner/arrangement.hpp"
#include "ksteiner/unit_ball.hpp"
#include "test_helpers.hpp"

using namespace ksteiner;

TEST_CASE("norm distance pinned values", "[unit_ball]") {
  CHECK(UnitBall::euclidean().distance({0, 0}, {3, 4}) == Catch::Approx(5.0));
  CHECK(UnitBall::rectilinear().distance({0, 0}, {1, 1}) == Catch::Approx(2.0));
  CHECK(UnitBall::ellipse(1, 0, 4).distance({0, 0}, {0, 1}) == Catch::Approx(2.0));
}

TEST_CASE("norm axioms on random balls", "[unit_ball]") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 60; ++trial) {
    UnitBall ball = testing::random_ball(rng);
    for (int i = 0; i < 40; ++i) {
      Point a{u(rng), u(rng)}, b{u(rng), u(rng)};
      double na = ball.norm(a), nb = ball.norm(b);
      CHECK(na >= 0);
      CHECK(ball.norm(a + b) <= na + nb + 1e-9);
      double lam = u(rng);
      CHECK(ball.norm(lam * a) == Catch::Approx(std::abs(lam) * na).margin(1e-9));
      CHECK(ball.distance(a, b) == Catch::Approx(ball.distance(b, a)).margin(0));
    }
    CHECK(ball.norm({0, 0}) == 0.0);
  }
}

TEST_CASE("line intersection with boundaries", "[unit_ball]") {
  UnitBall e = UnitBall::euclidean();
  auto r = e.line_intersection({0, 0}, {-2, 0}, {2, 0});
  REQUIRE(r.points.size() == 2);
  for (Point p : r.points) CHECK(std::abs(e.norm(p) - 1) < 1e-9);

  auto miss = e.line_intersection({0, 0}, {-2, 2}, {2, 2});
  CHECK(miss.points.empty());

  UnitBall d = UnitBall::rectilinear();
  auto diag = d.line_intersection({0, 0}, {-2, -2}, {2, 2});
  REQUIRE(diag.points.size() == 2);
  std::sort(diag.points.begin(), diag.points.end());
  CHECK(diag.points[0].x == Catch::Approx(-0.5));
  CHECK(diag.points[0].y == Catch::Approx(-0.5));
  CHECK(diag.points[1].x == Catch::Approx(0.5));
  CHECK(diag.points[1].y == Catch::Approx(0.5));

  CHECK_THROWS_AS(e.line_intersection({0, 0}, {1, 1}, {1, 1}), std::invalid_argument);
}

TEST_CASE("boundary-boundary intersection", "[unit_ball]") {
  UnitBall e = UnitBall::euclidean();
  auto two = e.boundary_intersection({0, 0}, {1, 0});
  REQUIRE(two.points.size() == 2);
  std::sort(two.points.begin(), two.points.end(),
            [](Point a, Point b) { return a.y < b.y; });
  CHECK(two.points[0].x == Catch::Approx(0.5));
  CHECK(two.points[0].y == Catch::Approx(-std::sqrt(3) / 2));
  CHECK(two.points[1].y == Catch::Approx(std::sqrt(3) / 2));

  auto none = e.boundary_intersection({0, 0}, {3, 0});
  CHECK(none.points.empty());

  UnitBall d = UnitBall::rectilinear();
  auto dd = d.boundary_intersection({0, 0}, {1, 0});
  bool has_upper = false, has_lower = false;
  for (Point p : dd.points) {
    if (std::abs(p.x - 0.5) < 1e-9 && std::abs(p.y - 0.5) < 1e-9) has_upper = true;
    if (std::abs(p.x - 0.5) < 1e-9 && std::abs(p.y + 0.5) < 1e-9) has_lower = true;
  }
  CHECK(has_upper);
  CHECK(has_lower);

  CHECK_THROWS_AS(e.boundary_intersection({1, 1}, {1, 1}), std::invalid_argument);
}

TEST_CASE("overlapping facets are reported as segments", "[unit_ball]") {
  UnitBall li = UnitBall::linf();
  auto r = li.boundary_intersection({0, 0}, {2, 0});
  REQUIRE_FALSE(r.overlaps.empty());
  for (const Segment& s : r.overlaps) {
    CHECK(std::abs(li.norm(s.a) - 1) < 1e-9);
    CHECK(std::abs(li.norm(s.a - Point{2, 0}) - 1) < 1e-9);
    CHECK(std::abs(li.norm(s.b) - 1) < 1e-9);
  }
}

TEST_CASE("boundary intersections re-evaluate to distance one", "[unit_ball]") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int trial = 0; trial < 40; ++trial) {
    UnitBall ball = testing::random_ball(rng);
    Point c{u(rng), u(rng)};
    if (ball.norm(c) < 1e-3 || ball.norm(c) > 1.95) continue;
    auto r = ball.boundary_intersection({0, 0}, c);
    for (Point v : r.points) {
      CHECK(std::abs(ball.norm(v) - 1) < 1e-7);
      CHECK(std::abs(ball.norm(v - c) - 1) < 1e-7);
    }
    Point p{u(rng), u(rng)}, q{u(rng), u(rng)};
    if (p == q) continue;
    auto lr = ball.line_intersection({0, 0}, p, q);
    for (Point v : lr.points) CHECK(std::abs(ball.norm(v) - 1) < 1e-7);
  }
}

TEST_CASE("triangle-inequality cone property", "[unit_ball]") {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int checked = 0;
  for (int trial = 0; trial < 4000 && checked < 300; ++trial) {
    UnitBall ball = testing::random_ball(rng);
    Point a = testing::random_boundary_point(rng, ball);
    Point b = testing::random_boundary_point(rng, ball);
    Point x{u(rng), u(rng)};
    if (ball.norm(x) > 0.98 || ball.norm(x) < 1e-3) continue;
    Point hit[2];
    int cnt = 0;
    if (!ksteiner::detail::segment_intersections(a, {0, 0}, b, x, 1e-12, hit, cnt))
      continue;
    ++checked;
    CHECK(ball.distance(a, x) <= ball.distance(b, x) + 1e-9);
  }
  CHECK(checked >= 100);
}

TEST_CASE("invalid balls are rejected", "[unit_ball]") {
  CHECK_THROWS_AS(UnitBall::ellipse(1, 2, 1), std::invalid_argument);
  CHECK_THROWS_AS(UnitBall::ellipse(-1, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(UnitBall::polygon({{1, 0}, {0, 1}, {-1, 0}}), std::invalid_argument);
  // Not centrally symmetric.
  CHECK_THROWS_AS(UnitBall::polygon({{2, 0}, {0, 1}, {-1, 0}, {0, -1}}),
                  std::invalid_argument);
  // Clockwise ordering.
  CHECK_THROWS_AS(UnitBall::polygon({{1, 0}, {0, -1}, {-1, 0}, {0, 1}}),
                  std::invalid_argument);
}
