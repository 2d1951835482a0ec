// Acceptance suite. Each criterion is one test case tagged [cN]; it prints a
// single "[criterion N] PASS/FAIL" line and backs it with assertions.

#include <catch2/catch_amalgamated.hpp>

#include <chrono>
#include <cstdio>
#include <set>

#include "ksteiner/fmst.hpp"
#include "ksteiner/json_io.hpp"
#include "ksteiner/oodc.hpp"
#include "ksteiner/oracle.hpp"
#include "ksteiner/solver.hpp"
#include "test_helpers.hpp"

using namespace ksteiner;

namespace {

void verdict(int criterion, bool pass, const std::string& detail) {
  std::printf("[criterion %d] %s: %s\n", criterion, pass ? "PASS" : "FAIL",
              detail.c_str());
  std::fflush(stdout);
}

double now_ms() {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

// Least squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = static_cast<int>(xs.size());
  for (int i = 0; i < n; ++i) {
    double lx = std::log(xs[i]), ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::array<ODCPartition, 6> build_partitions(const UnitBall& ball,
                                             const HexFrame& frame,
                                             const std::vector<Point>& X,
                                             const Box& box) {
  std::array<ODCPartition, 6> parts;
  for (int i = 0; i < 6; ++i)
    parts[i] = build_odc_partition(ball, frame, X, i, box);
  return parts;
}

double restricted_mst_total(const UnitBall& ball, const std::vector<Point>& X,
                            Point s, const std::vector<int>& allowed,
                            bool restrict) {
  int n = static_cast<int>(X.size());
  struct E {
    double w;
    int i, j;
  };
  std::vector<E> es;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) es.push_back({ball.distance(X[i], X[j]), i, j});
  std::vector<char> ok(n, restrict ? 0 : 1);
  for (int t : allowed) ok[t] = 1;
  for (int i = 0; i < n; ++i)
    if (ok[i]) es.push_back({ball.distance(X[i], s), i, n});
  std::sort(es.begin(), es.end(), [](const E& a, const E& b) {
    if (a.w != b.w) return a.w < b.w;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  });
  std::vector<int> parent(n + 1);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<double> chosen;
  for (const E& e : es) {
    int a = find(e.i), b = find(e.j);
    if (a == b) continue;
    parent[a] = b;
    chosen.push_back(e.w);
  }
  if (static_cast<int>(chosen.size()) != n) return -1;
  std::sort(chosen.begin(), chosen.end());
  double total = 0;
  for (double w : chosen) total += w;
  return total;
}

ProblemSpec random_spec(std::mt19937_64& rng, int n, const UnitBall& ball,
                        const CostFunction& cf, int k) {
  ProblemSpec spec;
  spec.terminals = testing::random_points(rng, n);
  spec.ball = ball;
  spec.cost = cf;
  spec.k = k;
  return spec;
}

}  // namespace

TEST_CASE("hexagon lemma on random balls", "[c1]") {
  std::mt19937_64 rng(1001);
  int violations = 0;
  double worst = 0;
  auto check_ball = [&](const UnitBall& ball) {
    HexFrame f = construct_hex_frame(ball);
    for (int i = 0; i < 6; ++i) {
      double e1 = std::abs(ball.norm(f.points[i]) - 1.0);
      double e2 = std::abs(ball.norm(f.points[i] - f.points[(i + 1) % 6]) - 1.0);
      worst = std::max({worst, e1, e2});
      if (e1 > 1e-9 || e2 > 1e-9) ++violations;
    }
  };
  for (int t = 0; t < 100; ++t) check_ball(testing::random_polygon_ball(rng));
  for (int t = 0; t < 100; ++t) check_ball(testing::random_ellipse_ball(rng));
  verdict(1, violations == 0,
          "hexagon frame on 100 polygon + 100 ellipse balls, worst residual " +
              std::to_string(worst));
  CHECK(violations == 0);
}

TEST_CASE("odc definitional consistency", "[c2]") {
  std::mt19937_64 rng(1002);
  long checked = 0, failures = 0;
  for (int n : {3, 5, 8}) {
    for (int inst = 0; inst < 2; ++inst) {
      UnitBall ball = inst == 0 ? testing::random_ellipse_ball(rng)
                                : testing::random_polygon_ball(rng);
      HexFrame frame = construct_hex_frame(ball);
      std::vector<Point> X = testing::random_points(rng, n);
      Box box = working_box(X, 3.0);
      for (int i = 0; i < 6; ++i) {
        ODCPartition part = build_odc_partition(ball, frame, X, i, box);
        for (std::size_t fc = 0; fc < part.face_owner.size(); ++fc) {
          const auto& face = part.arrangement.faces()[fc];
          Box bb = Box::bounding(face.outer);
          std::uniform_real_distribution<double> ux(bb.xmin, bb.xmax),
              uy(bb.ymin, bb.ymax);
          int got_samples = 0;
          for (int it = 0; it < 400 && got_samples < 20; ++it) {
            Point y = it == 0 ? face.representative : Point{ux(rng), uy(rng)};
            if (it > 0 && (!Arrangement::face_contains(face, y, 0.0) ||
                           Arrangement::on_ring_boundary(face.outer, y, 1e-9)))
              continue;
            ++got_samples;
            ++checked;
            auto scan = nearest_in_cone_scan(ball, frame, X, y, i);
            int expect = scan ? scan->first : -1;
            int got = part.face_owner[fc];
            if (got == expect) continue;
            bool tie = scan && got >= 0 && cone_contains(frame, y, i, X[got]) &&
                       std::abs(ball.distance(X[got], y) - scan->second) < 1e-7;
            if (!tie) ++failures;
          }
        }
      }
    }
  }
  verdict(2, failures == 0,
          "owner vs scan on " + std::to_string(checked) + " interior samples, " +
              std::to_string(failures) + " mismatches");
  CHECK(failures == 0);
  CHECK(checked > 2000);
}

TEST_CASE("main region theorem", "[c3]") {
  std::mt19937_64 rng(1003);
  int trials = 0, failures = 0;
  while (trials < 500) {
    UnitBall ball;
    switch (rng() % 4) {
      case 0: ball = UnitBall::euclidean(); break;
      case 1: ball = UnitBall::rectilinear(); break;
      case 2: ball = testing::random_polygon_ball(rng); break;
      default: ball = testing::random_ellipse_ball(rng); break;
    }
    HexFrame frame = construct_hex_frame(ball);
    int n = 3 + static_cast<int>(rng() % 6);
    std::vector<Point> X = testing::random_points(rng, n);
    Box box = working_box(X, 3.0);
    OODCOverlay ov = overlay_partitions(ball, frame, X,
                                        build_partitions(ball, frame, X, box), box);
    std::uniform_real_distribution<double> ux(box.xmin, box.xmax),
        uy(box.ymin, box.ymax);
    for (int rep = 0; rep < 20 && trials < 500; ++rep, ++trials) {
      Point s{ux(rng), uy(rng)};
      int f = locate(ov, s);
      std::vector<int> allowed;
      for (int t : ov.regions[f].label)
        if (t >= 0) allowed.push_back(t);
      std::sort(allowed.begin(), allowed.end());
      allowed.erase(std::unique(allowed.begin(), allowed.end()), allowed.end());
      double unrestricted = restricted_mst_total(ball, X, s, {}, false);
      double restricted = restricted_mst_total(ball, X, s, allowed, true);
      if (restricted < 0 || std::abs(restricted - unrestricted) > 1e-9) ++failures;
    }
  }
  verdict(3, failures == 0,
          "restricted vs unrestricted MST on 500 located points, " +
              std::to_string(failures) + " mismatches");
  CHECK(failures == 0);
}

TEST_CASE("oodc region growth", "[c4]") {
  std::mt19937_64 rng(1004);
  std::vector<double> ns, counts;
  for (int n : {4, 8, 16, 32}) {
    double total = 0;
    for (int seed = 0; seed < 10; ++seed) {
      UnitBall ball = UnitBall::euclidean();
      HexFrame frame = construct_hex_frame(ball);
      std::vector<Point> X = testing::random_points(rng, n);
      Box box = working_box(X, 3.0);
      OODCOverlay ov = overlay_partitions(
          ball, frame, X, build_partitions(ball, frame, X, box), box);
      total += static_cast<double>(ov.regions.size());
    }
    ns.push_back(n);
    counts.push_back(total / 10.0);
  }
  double slope = loglog_slope(ns, counts);
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "region counts %.1f/%.1f/%.1f/%.1f for n=4/8/16/32, fitted exponent %.3f",
                counts[0], counts[1], counts[2], counts[3], slope);
  verdict(4, slope <= 2.3, buf);
  CHECK(slope <= 2.3);
}

TEST_CASE("fmst exactness", "[c5]") {
  std::mt19937_64 rng(1005);
  UnitBall balls[3] = {UnitBall::euclidean(), UnitBall::rectilinear(),
                       UnitBall::linf()};
  int done = 0, failures = 0, corollary_checked = 0;
  for (int trial = 0; trial < 5000 && done < 500; ++trial) {
    const UnitBall& ball = balls[trial % 3];
    int n = 6 + static_cast<int>(rng() % 10);
    std::vector<Point> X = testing::random_points(rng, n);
    auto F = testing::random_viable_forest(rng, X, 3, 4);
    if (!F) continue;
    ++done;
    SpanningTree T = build_mst(ball, X);
    PP1Table pp1(T);
    PP2Table pp2(T);
    FmstResult r = fmst_update(T, pp1, &pp2, *F, ball);
    bool ok = r.tree.total_length() == fmst_contraction_oracle(ball, X, *F);
    ok = ok && r.tree.is_connected_tree();
    // F edges present and steiner adjacency preserved.
    std::set<std::pair<int, int>> edges;
    for (const TreeEdge& te : r.tree.edges) edges.insert({te.u, te.v});
    std::map<int, std::set<int>> want_adj, got_adj;
    for (const auto& fe : F->edges) {
      int u = fe.u.steiner ? n + fe.u.index : fe.u.index;
      int v = fe.v.steiner ? n + fe.v.index : fe.v.index;
      ok = ok && edges.count({std::min(u, v), std::max(u, v)}) == 1;
      if (fe.u.steiner) want_adj[u].insert(v);
      if (fe.v.steiner) want_adj[v].insert(u);
    }
    for (const TreeEdge& te : r.tree.edges) {
      if (te.u >= n) got_adj[te.u].insert(te.v);
      if (te.v >= n) got_adj[te.v].insert(te.u);
    }
    ok = ok && want_adj == got_adj;
    if (F->components().size() == 1) {
      ++corollary_checked;
      ok = ok && r.deleted_edges.size() == F->attachments().size() - 1;
    }
    if (!ok) ++failures;
  }
  verdict(5, done == 500 && failures == 0,
          std::to_string(done) + " random (T,F) pairs exact vs contraction oracle, " +
              std::to_string(corollary_checked) + " connected-case corollary checks, " +
              std::to_string(failures) + " failures");
  CHECK(done == 500);
  CHECK(failures == 0);
}

TEST_CASE("fmst update time is independent of n", "[c6]") {
  std::mt19937_64 rng(1006);
  UnitBall ball = UnitBall::euclidean();
  std::vector<double> medians;
  for (int n : {50, 100, 200}) {
    std::vector<Point> X = testing::random_points(rng, n);
    SpanningTree T = build_mst(ball, X);
    PP1Table pp1(T);
    PP2Table pp2(T);
    // Fixed forest shape: two components, three steiner points in total.
    ViableForest F;
    F.steiner = {{0.2, 0.2}, {0.4, 0.3}, {0.7, 0.7}};
    F.edges = {{steiner_ref(0), steiner_ref(1)},
               {terminal_ref(0), steiner_ref(0)},
               {terminal_ref(1), steiner_ref(0)},
               {terminal_ref(2), steiner_ref(1)},
               {terminal_ref(3), steiner_ref(2)},
               {terminal_ref(4), steiner_ref(2)},
               {terminal_ref(5), steiner_ref(2)}};
    REQUIRE(is_viable(F, n));
    std::vector<double> times;
    std::size_t sink = 0;
    for (int rep = 0; rep < 400; ++rep) {
      double t0 = now_ms();
      auto plan = fmst_plan(T, pp1, &pp2, F);
      double t1 = now_ms();
      times.push_back(t1 - t0);
      sink += plan.size();
    }
    REQUIRE(sink > 0);
    std::sort(times.begin(), times.end());
    medians.push_back(times[times.size() / 2]);
  }
  double ratio = *std::max_element(medians.begin(), medians.end()) /
                 std::max(*std::min_element(medians.begin(), medians.end()), 1e-9);
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "median fmst_plan times %.4f/%.4f/%.4f ms for n=50/100/200, ratio %.2f",
                medians[0], medians[1], medians[2], ratio);
  verdict(6, ratio < 3.0, buf);
  CHECK(ratio < 3.0);
}

TEST_CASE("end-to-end optimality k=1", "[c7]") {
  std::mt19937_64 rng(1007);
  int failures = 0, trials = 0;
  double worst_rel = 0;
  for (int kind = 0; kind < 2; ++kind) {
    UnitBall ball = kind == 0 ? UnitBall::euclidean() : UnitBall::rectilinear();
    for (int inst = 0; inst < 50; ++inst) {
      int n = 3 + static_cast<int>(rng() % 5);  // up to 7
      std::vector<Point> terms = testing::random_points(rng, n);
      for (const CostFunction& cf :
           {CostFunction::sum(), CostFunction::bottleneck()}) {
        ProblemSpec spec;
        spec.terminals = terms;
        spec.ball = ball;
        spec.cost = cf;
        spec.k = 1;
        Solution sol = solve(spec);
        Box box = working_box(terms, spec.box_inflation);
        auto oracle = grid_steiner_oracle(ball, cf, terms, 1, box);
        double rel = std::abs(sol.cost - oracle.cost) / std::max(1e-12, oracle.cost);
        worst_rel = std::max(worst_rel, rel);
        ++trials;
        if (rel > 1e-4) ++failures;
      }
    }
  }

  // Pinned cases.
  ProblemSpec sq;
  sq.terminals = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  sq.k = 1;
  double c_sq = solve(sq).cost;
  bool pin1 = std::abs(c_sq - 2 * std::sqrt(2.0)) <= 1e-6;

  ProblemSpec tri;
  tri.terminals = {{0, 0}, {1, 0}, {0.5, std::sqrt(3) / 2}};
  tri.k = 1;
  double c_tri = solve(tri).cost;
  bool pin2 = std::abs(c_tri - std::sqrt(3.0)) <= 1e-6;

  ProblemSpec rsq;
  rsq.terminals = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  rsq.ball = UnitBall::rectilinear();
  rsq.k = 1;
  double c_rsq = solve(rsq).cost;
  bool pin3 = std::abs(c_rsq - 3.0) <= 1e-9;

  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "%d random solves worst rel err %.2e; square %.9f, triangle %.9f, "
                "rect square %.12f",
                trials, worst_rel, c_sq, c_tri, c_rsq);
  verdict(7, failures == 0 && pin1 && pin2 && pin3, buf);
  CHECK(failures == 0);
  CHECK(pin1);
  CHECK(pin2);
  CHECK(pin3);
}

TEST_CASE("end-to-end optimality k=2", "[c8]") {
  std::mt19937_64 rng(1008);
  int failures = 0, trials = 0;
  for (int inst = 0; inst < 20; ++inst) {
    int n = 3 + static_cast<int>(rng() % 3);  // up to 5
    std::vector<Point> terms = testing::random_points(rng, n);
    for (const CostFunction& cf :
         {CostFunction::sum(), CostFunction::bottleneck()}) {
      ProblemSpec spec;
      spec.terminals = terms;
      spec.cost = cf;
      spec.k = 2;
      Solution s2 = solve(spec);
      spec.k = 1;
      Solution s1 = solve(spec);
      Box box = working_box(terms, spec.box_inflation);
      auto oracle = grid_steiner_oracle(spec.ball, cf, terms, 2, box);
      ++trials;
      if (s2.cost > oracle.cost + oracle.error_bound + 1e-9) ++failures;
      if (s2.cost > s1.cost + 1e-9) ++failures;
    }
  }
  verdict(8, failures == 0,
          std::to_string(trials) + " k=2 solves within oracle bound and monotone in k, " +
              std::to_string(failures) + " failures");
  CHECK(failures == 0);
}

TEST_CASE("solver scaling at k=1", "[c9]") {
  std::mt19937_64 rng(1009);
  std::vector<double> ns, times;
  for (int n : {8, 16, 32, 64}) {
    std::vector<double> samples;
    for (int seed = 0; seed < 3; ++seed) {
      ProblemSpec spec = random_spec(rng, n, UnitBall::euclidean(),
                                     CostFunction::sum(), 1);
      double t0 = now_ms();
      Solution sol = solve(spec);
      samples.push_back(now_ms() - t0);
      REQUIRE(sol.cost > 0);
    }
    std::sort(samples.begin(), samples.end());
    ns.push_back(n);
    times.push_back(samples[1]);
  }
  double slope = loglog_slope(ns, times);
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "median solve times %.0f/%.0f/%.0f/%.0f ms for n=8/16/32/64, "
                "fitted slope %.3f",
                times[0], times[1], times[2], times[3], slope);
  verdict(9, slope <= 2.5, buf);
  CHECK(slope <= 2.5);
}

TEST_CASE("box robustness", "[c10]") {
  std::mt19937_64 rng(1010);
  int failures = 0, trials = 0;
  double worst = 0;
  auto compare = [&](ProblemSpec spec) {
    spec.box_inflation = 3.0;
    double c1 = solve(spec).cost;
    spec.box_inflation = 6.0;
    double c2 = solve(spec).cost;
    worst = std::max(worst, std::abs(c1 - c2));
    ++trials;
    if (std::abs(c1 - c2) > 1e-9) ++failures;
  };
  // The criterion-7 suite (reduced sampling keeps the run inside budget)...
  for (int kind = 0; kind < 2; ++kind) {
    UnitBall ball = kind == 0 ? UnitBall::euclidean() : UnitBall::rectilinear();
    for (int inst = 0; inst < 25; ++inst) {
      int n = 3 + static_cast<int>(rng() % 5);
      std::vector<Point> terms = testing::random_points(rng, n);
      for (const CostFunction& cf :
           {CostFunction::sum(), CostFunction::bottleneck()}) {
        ProblemSpec spec;
        spec.terminals = terms;
        spec.ball = ball;
        spec.cost = cf;
        spec.k = 1;
        compare(spec);
      }
    }
  }
  // ... and the criterion-8 suite at k=2.
  for (int inst = 0; inst < 10; ++inst) {
    int n = 3 + static_cast<int>(rng() % 3);
    std::vector<Point> terms = testing::random_points(rng, n);
    for (const CostFunction& cf :
         {CostFunction::sum(), CostFunction::bottleneck()}) {
      ProblemSpec spec;
      spec.terminals = terms;
      spec.cost = cf;
      spec.k = 2;
      compare(spec);
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "doubling box_inflation over %d solves, worst cost delta %.2e",
                trials, worst);
  verdict(10, failures == 0, buf);
  CHECK(failures == 0);
}

TEST_CASE("determinism across thread counts", "[c11]") {
  std::mt19937_64 rng(1011);
  int failures = 0, trials = 0;
  for (int kind = 0; kind < 2; ++kind) {
    UnitBall ball = kind == 0 ? UnitBall::euclidean() : UnitBall::rectilinear();
    for (int inst = 0; inst < 15; ++inst) {
      int n = 3 + static_cast<int>(rng() % 5);
      int k = inst % 3 == 0 ? 2 : 1;
      std::vector<Point> terms = testing::random_points(rng, n);
      for (const CostFunction& cf :
           {CostFunction::sum(), CostFunction::bottleneck()}) {
        ProblemSpec spec;
        spec.terminals = terms;
        spec.ball = ball;
        spec.cost = cf;
        spec.k = k;
        spec.threads = 1;
        Solution s1 = solve(spec);
        spec.threads = 4;
        Solution s4 = solve(spec);
        json j1 = solution_to_json(s1, spec, false);
        json j4 = solution_to_json(s4, spec, false);
        ++trials;
        if (j1.dump() != j4.dump()) ++failures;
      }
    }
  }
  verdict(11, failures == 0,
          std::to_string(trials) + " instances solved at --threads 1 and 4, " +
              std::to_string(failures) + " solution-file differences");
  CHECK(failures == 0);
}
