#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "ksteiner/odc.hpp"
#include "ksteiner/oracle.hpp"
#include "ksteiner/solver.hpp"
#include "test_helpers.hpp"

using namespace ksteiner;

namespace {

// Sample interior points of a face by jittering around its representative and
// keeping the hits.
std::vector<Point> face_samples(const Arrangement::Face& face, int want,
                                std::mt19937_64& rng) {
  std::vector<Point> out{face.representative};
  Box bb = Box::bounding(face.outer);
  std::uniform_real_distribution<double> ux(bb.xmin, bb.xmax), uy(bb.ymin, bb.ymax);
  for (int it = 0; it < 40 * want && static_cast<int>(out.size()) < want; ++it) {
    Point p{ux(rng), uy(rng)};
    if (Arrangement::face_contains(face, p, 0.0) &&
        !Arrangement::on_ring_boundary(face.outer, p, 1e-9))
      out.push_back(p);
  }
  return out;
}

}  // namespace

TEST_CASE("single terminal gives the visibility wedge and its complement",
          "[odc]") {
  UnitBall e = UnitBall::euclidean();
  HexFrame f = construct_hex_frame(e, {1, 0});
  std::vector<Point> X{{0.5, 0.5}};
  Box box{-3, -3, 3, 3};
  for (int i = 0; i < 6; ++i) {
    ODCPartition part = build_odc_partition(e, f, X, i, box);
    std::set<int> owners(part.face_owner.begin(), part.face_owner.end());
    CHECK(owners.size() == 2);
    CHECK(owners.count(0) == 1);
    CHECK(owners.count(-1) == 1);
    // Owner faces are exactly { y : x in K(y, theta_i, theta_{i+1}) }.
    for (std::size_t fc = 0; fc < part.face_owner.size(); ++fc) {
      Point rep = part.arrangement.faces()[fc].representative;
      bool sees = cone_contains(f, rep, i, X[0]);
      CHECK(sees == (part.face_owner[fc] == 0));
    }
  }
}

TEST_CASE("two-terminal euclidean partition agrees with the scan on a grid",
          "[odc]") {
  UnitBall e = UnitBall::euclidean();
  HexFrame f = construct_hex_frame(e, {1, 0});
  std::vector<Point> X{{0, 0}, {2, 0}};
  Box box{-5, -5, 7, 5};
  for (int i = 0; i < 6; ++i) {
    ODCPartition part = build_odc_partition(e, f, X, i, box);
    int checked = 0;
    for (int gx = 0; gx < 50; ++gx) {
      for (int gy = 0; gy < 50; ++gy) {
        Point y{box.xmin + box.width() * (gx + 0.5) / 50,
                box.ymin + box.height() * (gy + 0.5) / 50};
        int fc = part.arrangement.locate(y, 0.0);
        if (fc < 0) continue;
        auto scan = nearest_in_cone_scan(e, f, X, y, i);
        int expect = scan ? scan->first : -1;
        int got = part.face_owner[fc];
        if (got == expect) {
          ++checked;
          continue;
        }
        // Tolerate ties within epsilon.
        if (scan && got >= 0) {
          double d_got = e.distance(X[got], y);
          if (std::abs(d_got - scan->second) < 1e-7 &&
              cone_contains(f, y, i, X[got])) {
            ++checked;
            continue;
          }
        }
        CAPTURE(i, y.x, y.y, got, expect);
        CHECK(got == expect);
      }
    }
    CHECK(checked > 2000);
  }
}

TEST_CASE("three-terminal partition has straight-segment owner cells", "[odc]") {
  UnitBall e = UnitBall::euclidean();
  HexFrame f = construct_hex_frame(e, {1, 0});
  std::vector<Point> X{{0, 0}, {2, 0}, {1, 1.5}};
  Box box{-6, -6, 8, 8};
  ODCPartition part = build_odc_partition(e, f, X, 0, box);
  std::set<int> owners(part.face_owner.begin(), part.face_owner.end());
  CHECK(owners.count(0) == 1);
  CHECK(owners.count(1) == 1);
  CHECK(owners.count(2) == 1);
  CHECK(part.cells().size() <= X.size() + 1);
}

TEST_CASE("definitional consistency and coverage on random instances", "[odc]") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 6; ++trial) {
    UnitBall ball = trial % 2 ? testing::random_polygon_ball(rng)
                              : testing::random_ellipse_ball(rng);
    HexFrame f = construct_hex_frame(ball);
    int n = 3 + static_cast<int>(rng() % 4);
    std::vector<Point> X = testing::random_points(rng, n);
    Box box = working_box(X, 1.0);
    int i = static_cast<int>(rng() % 6);
    ODCPartition part = build_odc_partition(ball, f, X, i, box);

    double area = 0;
    for (const auto& face : part.arrangement.faces()) area += face.area;
    CHECK(area == Catch::Approx(box.area()).epsilon(1e-6));
    CHECK(part.cells().size() <= X.size() + 1);

    for (std::size_t fc = 0; fc < part.face_owner.size(); ++fc) {
      const auto& face = part.arrangement.faces()[fc];
      if (face.area < 1e-6) continue;
      for (Point y : face_samples(face, 20, rng)) {
        auto scan = nearest_in_cone_scan(ball, f, X, y, i);
        int expect = scan ? scan->first : -1;
        int got = part.face_owner[fc];
        if (got == expect) continue;
        bool tie_ok = false;
        if (scan && got >= 0 && cone_contains(f, y, i, X[got])) {
          double d_got = ball.distance(X[got], y);
          tie_ok = std::abs(d_got - scan->second) < 1e-7;
        }
        CAPTURE(trial, i, y.x, y.y, got, expect);
        CHECK(tie_ok);
      }
    }
  }
}

TEST_CASE("odc voronoi equivalence via convex distance", "[odc]") {
  std::mt19937_64 rng(43);
  UnitBall ball = testing::random_ellipse_ball(rng);
  HexFrame f = construct_hex_frame(ball);
  std::vector<Point> X = testing::random_points(rng, 4);
  Box box = working_box(X, 1.0);
  int i = 2;
  SectorShape sec = sector_shape(ball, f, i);
  ODCPartition part = build_odc_partition(ball, f, X, i, box);
  std::uniform_real_distribution<double> ux(box.xmin, box.xmax), uy(box.ymin, box.ymax);
  for (int rep = 0; rep < 200; ++rep) {
    Point y{ux(rng), uy(rng)};
    int fc = part.arrangement.locate(y, 0.0);
    REQUIRE(fc >= 0);
    int owner = part.face_owner[fc];
    double dmin = std::numeric_limits<double>::infinity();
    for (const Point& x : X) dmin = std::min(dmin, convex_distance(sec, x, y));
    if (owner < 0) {
      CHECK(std::isinf(dmin));
    } else {
      CHECK(convex_distance(sec, X[owner], y) <= dmin + 1e-7);
    }
  }
}

TEST_CASE("enlarging the box preserves interior labels", "[odc]") {
  std::mt19937_64 rng(47);
  UnitBall ball = UnitBall::rectilinear();
  HexFrame f = construct_hex_frame(ball, {1, 0});
  std::vector<Point> X = testing::random_points(rng, 5);
  Box small = working_box(X, 1.0);
  Box big = small.inflated(small.diagonal());
  ODCPartition p1 = build_odc_partition(ball, f, X, 1, small);
  ODCPartition p2 = build_odc_partition(ball, f, X, 1, big);
  std::uniform_real_distribution<double> ux(small.xmin, small.xmax),
      uy(small.ymin, small.ymax);
  for (int rep = 0; rep < 300; ++rep) {
    Point y{ux(rng), uy(rng)};
    int f1 = p1.arrangement.locate(y, 0.0);
    int f2 = p2.arrangement.locate(y, 0.0);
    REQUIRE(f1 >= 0);
    REQUIRE(f2 >= 0);
    int o1 = p1.face_owner[f1], o2 = p2.face_owner[f2];
    if (o1 == o2) continue;
    // Accept epsilon ties across the two runs.
    auto scan = nearest_in_cone_scan(ball, f, X, y, 1);
    bool tie = scan && o1 >= 0 && o2 >= 0 &&
               std::abs(ball.distance(X[o1], y) - ball.distance(X[o2], y)) < 1e-7;
    CAPTURE(y.x, y.y, o1, o2);
    CHECK(tie);
  }
}

TEST_CASE("empty terminal set is rejected", "[odc]") {
  UnitBall e = UnitBall::euclidean();
  HexFrame f = construct_hex_frame(e, {1, 0});
  Box box{-1, -1, 1, 1};
  CHECK_THROWS_AS(build_odc_partition(e, f, {}, 0, box), std::invalid_argument);
}
