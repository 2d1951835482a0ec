#include <catch2/catch_amalgamated.hpp>

#include "ksteiner/mst.hpp"
#include "ksteiner/oracle.hpp"
#include "test_helpers.hpp"

using namespace ksteiner;

TEST_CASE("collinear points", "[mst]") {
  SpanningTree t = build_mst(UnitBall::euclidean(), {{0, 0}, {1, 0}, {2, 0}});
  REQUIRE(t.edges.size() == 2);
  CHECK(t.total_length() == Catch::Approx(2.0));
  for (const TreeEdge& e : t.edges) CHECK(e.length == Catch::Approx(1.0));
}

TEST_CASE("unit square", "[mst]") {
  SpanningTree t =
      build_mst(UnitBall::euclidean(), {{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  CHECK(t.total_length() == Catch::Approx(3.0));
}

TEST_CASE("matches the brute-force oracle", "[mst]") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 100; ++trial) {
    UnitBall ball = testing::random_ball(rng);
    int n = 2 + static_cast<int>(rng() % 6);
    std::vector<Point> pts = testing::random_points(rng, n);
    SpanningTree fast = build_mst(ball, pts);
    SpanningTree brute = brute_mst(ball, pts);
    CAPTURE(trial, n);
    CHECK(fast.total_length() == brute.total_length());
    CHECK(fast.is_connected_tree());
  }
}

TEST_CASE("equal sorted length multisets across optimal trees", "[mst]") {
  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 40; ++trial) {
    UnitBall ball = testing::random_ball(rng);
    std::vector<Point> pts = testing::random_points(rng, 6);
    auto l1 = build_mst(ball, pts).lengths();
    auto l2 = brute_mst(ball, pts).lengths();
    std::sort(l1.begin(), l1.end());
    std::sort(l2.begin(), l2.end());
    CHECK(l1 == l2);
  }
}

TEST_CASE("cut property holds exhaustively", "[mst]") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 12; ++trial) {
    UnitBall ball = testing::random_ball(rng);
    int n = 4 + static_cast<int>(rng() % 9);  // up to 12
    std::vector<Point> pts = testing::random_points(rng, n);
    SpanningTree t = build_mst(ball, pts);
    auto adj = t.adjacency();
    // Walk the path between every pair; every edge on it must be no longer
    // than the direct distance.
    for (int x = 0; x < n; ++x) {
      std::vector<int> parent_edge(n, -1), order{x};
      std::vector<char> seen(n, 0);
      seen[x] = 1;
      for (std::size_t qi = 0; qi < order.size(); ++qi) {
        int v = order[qi];
        for (int e : adj[v]) {
          int w = t.edges[e].u == v ? t.edges[e].v : t.edges[e].u;
          if (seen[w]) continue;
          seen[w] = 1;
          parent_edge[w] = e;
          order.push_back(w);
        }
      }
      for (int y = 0; y < n; ++y) {
        if (y == x) continue;
        double direct = ball.distance(pts[x], pts[y]);
        for (int v = y; v != x;) {
          const TreeEdge& e = t.edges[parent_edge[v]];
          CHECK(e.length <= direct + 1e-12);
          v = e.u == v ? e.v : e.u;
        }
      }
    }
  }
}

TEST_CASE("duplicate points give zero-length edges", "[mst]") {
  SpanningTree t = build_mst(UnitBall::euclidean(), {{1, 1}, {1, 1}, {2, 1}});
  REQUIRE(t.edges.size() == 2);
  CHECK(t.edges[0].length == 0.0);
  CHECK(t.total_length() == Catch::Approx(1.0));
}

TEST_CASE("singleton and empty inputs", "[mst]") {
  SpanningTree t = build_mst(UnitBall::euclidean(), {{3, 4}});
  CHECK(t.edges.empty());
  CHECK(t.total_length() == 0.0);
  CHECK_THROWS_AS(build_mst(UnitBall::euclidean(), {}), std::invalid_argument);
}
