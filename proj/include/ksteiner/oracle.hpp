#pragma once

// Independent brute-force references used to derive expected values and to
// check every theorem-backed step. Everything here is written against
// norm_distance alone: spanning structures come from Prufer enumeration or a
// local Kruskal/Prim, never from the production MST or partition code.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ksteiner/cost.hpp"
#include "ksteiner/geometry.hpp"
#include "ksteiner/hex_frame.hpp"
#include "ksteiner/mst.hpp"
#include "ksteiner/unit_ball.hpp"
#include "ksteiner/viable_forest.hpp"

namespace ksteiner {

struct OracleConfig {
  int coarse_grid = 41;   // k'=1 schedule
  int levels = 6;
  double shrink = 5.0;
  int coarse_grid_k2 = 21;  // joint k'=2 schedule
  int levels_k2 = 4;
  int max_n = 7;
  int max_k = 2;
};

namespace oracle_detail {

inline double sorted_sum(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  double s = 0;
  for (double x : v) s += x;
  return s;
}

// Local Prim over an explicit weight matrix with (weight, i, j) tie order.
inline std::vector<std::pair<int, int>> prim_edges(
    const std::vector<std::vector<double>>& w) {
  const int n = static_cast<int>(w.size());
  std::vector<std::pair<int, int>> edges;
  if (n <= 1) return edges;
  std::vector<char> in(n, 0);
  std::vector<int> best_from(n, 0);
  std::vector<double> best_w(n);
  in[0] = 1;
  for (int v = 1; v < n; ++v) best_w[v] = w[0][v];
  for (int step = 1; step < n; ++step) {
    int pick = -1;
    for (int v = 0; v < n; ++v) {
      if (in[v]) continue;
      if (pick < 0) { pick = v; continue; }
      double a = best_w[v], b = best_w[pick];
      int au = std::min(best_from[v], v), av = std::max(best_from[v], v);
      int bu = std::min(best_from[pick], pick), bv = std::max(best_from[pick], pick);
      if (a < b || (a == b && (au < bu || (au == bu && av < bv)))) pick = v;
    }
    edges.push_back({std::min(best_from[pick], pick), std::max(best_from[pick], pick)});
    in[pick] = 1;
    for (int v = 0; v < n; ++v) {
      if (in[v]) continue;
      double cand = w[pick][v];
      int cu = std::min(pick, v), cv = std::max(pick, v);
      int bu = std::min(best_from[v], v), bv = std::max(best_from[v], v);
      if (cand < best_w[v] ||
          (cand == best_w[v] && (cu < bu || (cu == bu && cv < bv)))) {
        best_w[v] = cand;
        best_from[v] = pick;
      }
    }
  }
  return edges;
}

inline std::vector<std::vector<double>> distance_matrix(
    const UnitBall& ball, const std::vector<Point>& pts) {
  const int n = static_cast<int>(pts.size());
  std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) w[i][j] = w[j][i] = ball.distance(pts[i], pts[j]);
  return w;
}

// Cost of the local-MST spanning structure on pts under cf. The edge-swap
// lemma makes one minimum spanning tree optimal for every monotone symmetric
// cost considered here.
inline double best_tree_cost(const UnitBall& ball, const CostFunction& cf,
                             const std::vector<Point>& pts) {
  auto w = distance_matrix(ball, pts);
  auto edges = prim_edges(w);
  std::vector<double> ls;
  ls.reserve(edges.size());
  for (auto [u, v] : edges) ls.push_back(w[u][v]);
  return evaluate_cost(cf, ls);
}

}  // namespace oracle_detail

// Exact minimum over all labeled spanning trees via Prufer enumeration.
inline SpanningTree brute_mst(const UnitBall& ball,
                              const std::vector<Point>& points) {
  const int n = static_cast<int>(points.size());
  if (n < 1) throw std::invalid_argument("brute_mst: empty input");
  if (n > 8) throw std::invalid_argument("brute_mst: size cap is n <= 8");

  SpanningTree best;
  best.nodes = points;
  best.roles.assign(n, NodeRole::terminal);
  if (n == 1) return best;

  auto w = oracle_detail::distance_matrix(ball, points);
  auto tree_total = [&](const std::vector<std::pair<int, int>>& edges) {
    std::vector<double> ls;
    for (auto [u, v] : edges) ls.push_back(w[u][v]);
    return oracle_detail::sorted_sum(ls);
  };

  std::vector<std::pair<int, int>> best_edges;
  double best_total = std::numeric_limits<double>::infinity();

  auto consider = [&](const std::vector<std::pair<int, int>>& edges) {
    double total = tree_total(edges);
    if (total < best_total) {
      best_total = total;
      best_edges = edges;
    }
  };

  if (n == 2) {
    consider({{0, 1}});
  } else {
    std::vector<int> prufer(n - 2, 0);
    std::vector<int> degree(n);
    while (true) {
      // Decode the current Prufer sequence.
      std::fill(degree.begin(), degree.end(), 1);
      for (int p : prufer) ++degree[p];
      std::vector<std::pair<int, int>> edges;
      std::vector<int> deg = degree;
      for (int p : prufer) {
        int leaf = 0;
        while (deg[leaf] != 1) ++leaf;
        edges.push_back({std::min(leaf, p), std::max(leaf, p)});
        --deg[leaf];
        --deg[p];
      }
      int a = 0;
      while (deg[a] != 1) ++a;
      int b = a + 1;
      while (deg[b] != 1) ++b;
      edges.push_back({a, b});
      consider(edges);

      int pos = n - 3;
      while (pos >= 0 && prufer[pos] == n - 1) prufer[pos--] = 0;
      if (pos < 0) break;
      ++prufer[pos];
    }
  }

  for (auto [u, v] : best_edges) best.edges.push_back({u, v, w[u][v]});
  std::sort(best.edges.begin(), best.edges.end(), edge_less);
  return best;
}

struct GridOracleResult {
  double cost = 0;
  double error_bound = 0;
  int best_kprime = 0;
};

// Nested grid search over steiner placements inside the working box; each
// placement is scored by the local-MST spanning structure on X and S together.
inline GridOracleResult grid_steiner_oracle(const UnitBall& ball,
                                            const CostFunction& cf,
                                            const std::vector<Point>& X, int k,
                                            const Box& box,
                                            const OracleConfig& cfg = {}) {
  const int n = static_cast<int>(X.size());
  if (n > cfg.max_n || k > cfg.max_k)
    throw std::invalid_argument("grid_steiner_oracle: size cap exceeded");
  if (n < 1) throw std::invalid_argument("grid_steiner_oracle: empty input");

  // Norm-vs-euclidean constant, for the Lipschitz part of the error bound.
  double cnorm = 0;
  for (int d = 0; d < 64; ++d) {
    double a = 2 * M_PI * d / 64.0;
    cnorm = std::max(cnorm, ball.norm({std::cos(a), std::sin(a)}));
  }

  GridOracleResult res;
  res.cost = oracle_detail::best_tree_cost(ball, cf, X);
  res.best_kprime = 0;
  res.error_bound = 0;

  auto lipschitz = [&](int kprime, double cell) {
    double dmax = box.diagonal() * cnorm;
    double rate = 1.0;
    if (cf.kind == CostFunction::Kind::power)
      rate = cf.p * std::pow(std::max(dmax, 1.0), std::max(0.0, cf.p - 1.0));
    return 6.0 * kprime * cnorm * rate * cell;
  };

  // Coarse passes cover both the full working box and a tight box around the
  // terminals (where any useful placement lives); the best coarse cells each
  // get their own refinement cascade.
  Box tight = Box::bounding(X);
  tight = tight.inflated(0.35 * std::max(tight.diagonal(), 1e-6) + 1e-6);

  auto score1 = [&](Point s) {
    std::vector<Point> pts = X;
    pts.push_back(s);
    return oracle_detail::best_tree_cost(ball, cf, pts);
  };

  if (k >= 1) {
    const int g = cfg.coarse_grid;
    std::vector<std::pair<double, Point>> coarse;
    for (const Box* b : {&box, const_cast<const Box*>(&tight)}) {
      for (int ix = 0; ix < g; ++ix) {
        for (int iy = 0; iy < g; ++iy) {
          Point s{b->xmin + b->width() * ix / (g - 1.0),
                  b->ymin + b->height() * iy / (g - 1.0)};
          coarse.push_back({score1(s), s});
        }
      }
    }
    std::sort(coarse.begin(), coarse.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    double cell = std::hypot(tight.width(), tight.height()) / (g - 1.0);
    double best = std::numeric_limits<double>::infinity();
    for (int branch = 0; branch < 6 && branch < static_cast<int>(coarse.size());
         ++branch) {
      Point center = coarse[branch].second;
      double bc = coarse[branch].first;
      double w = cell;
      for (int lv = 0; lv < cfg.levels; ++lv) {
        Point level_center = center;
        for (int ix = -g / 2; ix <= g / 2; ++ix) {
          for (int iy = -g / 2; iy <= g / 2; ++iy) {
            Point s{level_center.x + 2.0 * w * ix / g,
                    level_center.y + 2.0 * w * iy / g};
            double c = score1(s);
            if (c < bc) {
              bc = c;
              center = s;
            }
          }
        }
        w /= cfg.shrink;
      }
      if (bc < best) best = bc;
    }
    double final_cell = cell / std::pow(cfg.shrink, cfg.levels - 1);
    if (best < res.cost) {
      res.cost = best;
      res.best_kprime = 1;
    }
    res.error_bound = std::max(res.error_bound, lipschitz(1, final_cell));
  }

  if (k >= 2) {
    const int g = cfg.coarse_grid_k2;
    std::vector<Point> grid_pts;
    for (int ix = 0; ix < g; ++ix)
      for (int iy = 0; iy < g; ++iy)
        grid_pts.push_back({tight.xmin + tight.width() * ix / (g - 1.0),
                            tight.ymin + tight.height() * iy / (g - 1.0)});
    struct PairCand {
      double cost;
      Point s1, s2;
    };
    std::vector<PairCand> coarse;
    for (std::size_t i = 0; i < grid_pts.size(); ++i) {
      std::vector<Point> pts = X;
      pts.push_back(grid_pts[i]);
      pts.push_back({0, 0});
      for (std::size_t j = i; j < grid_pts.size(); ++j) {
        pts.back() = grid_pts[j];
        coarse.push_back(
            {oracle_detail::best_tree_cost(ball, cf, pts), grid_pts[i], grid_pts[j]});
      }
    }
    std::sort(coarse.begin(), coarse.end(),
              [](const PairCand& a, const PairCand& b) { return a.cost < b.cost; });
    double cell = std::hypot(tight.width(), tight.height()) / (g - 1.0);
    double best = std::numeric_limits<double>::infinity();
    const int h = g / 2;
    for (int branch = 0; branch < 3 && branch < static_cast<int>(coarse.size());
         ++branch) {
      Point b1 = coarse[branch].s1, b2 = coarse[branch].s2;
      double bc = coarse[branch].cost;
      double w = cell;
      for (int lv = 1; lv < cfg.levels_k2; ++lv) {
        const Point c1 = b1, c2 = b2;
        std::vector<Point> pts = X;
        pts.push_back({0, 0});
        pts.push_back({0, 0});
        for (int i1 = -h; i1 <= h; ++i1)
          for (int j1 = -h; j1 <= h; ++j1) {
            pts[pts.size() - 2] = {c1.x + 2.0 * w * i1 / g, c1.y + 2.0 * w * j1 / g};
            for (int i2 = -h; i2 <= h; ++i2)
              for (int j2 = -h; j2 <= h; ++j2) {
                pts.back() = {c2.x + 2.0 * w * i2 / g, c2.y + 2.0 * w * j2 / g};
                double c = oracle_detail::best_tree_cost(ball, cf, pts);
                if (c < bc) {
                  bc = c;
                  b1 = pts[pts.size() - 2];
                  b2 = pts.back();
                }
              }
          }
        w /= cfg.shrink;
      }
      if (bc < best) best = bc;
    }
    double final_cell = cell / std::pow(cfg.shrink, cfg.levels_k2 - 1);
    if (best < res.cost) {
      res.cost = best;
      res.best_kprime = 2;
    }
    res.error_bound = std::max(res.error_bound, lipschitz(2, final_cell));
  }
  return res;
}

// Minimum F-fixed spanning length by contraction: terminals within one
// component's attachment set are joined at weight zero, non-F steiner edges
// are forbidden, and a local Kruskal runs over the terminal graph. Totals are
// sorted-ascending sums, matching the arithmetic of SpanningTree totals.
inline double fmst_contraction_oracle(const UnitBall& ball,
                                      const std::vector<Point>& X,
                                      const ViableForest& F) {
  const int n = static_cast<int>(X.size());
  auto comps = F.components();
  std::vector<int> comp_of(n, -1);
  for (std::size_t c = 0; c < comps.size(); ++c)
    for (int t : comps[c].attachments) comp_of[t] = static_cast<int>(c);

  struct E {
    double w;
    int i, j;
  };
  std::vector<E> es;
  es.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double w = (comp_of[i] >= 0 && comp_of[i] == comp_of[j])
                     ? 0.0
                     : ball.distance(X[i], X[j]);
      es.push_back({w, i, j});
    }
  std::sort(es.begin(), es.end(), [](const E& a, const E& b) {
    if (a.w != b.w) return a.w < b.w;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  });
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<double> selected;
  for (const E& e : es) {
    int ri = find(e.i), rj = find(e.j);
    if (ri == rj) continue;
    parent[ri] = rj;
    if (comp_of[e.i] < 0 || comp_of[e.i] != comp_of[e.j]) selected.push_back(e.w);
  }
  for (const auto& fe : F.edges) {
    Point a = fe.u.steiner ? F.steiner[fe.u.index] : X[fe.u.index];
    Point b = fe.v.steiner ? F.steiner[fe.v.index] : X[fe.v.index];
    int u = fe.u.steiner ? n + fe.u.index : fe.u.index;
    int v = fe.v.steiner ? n + fe.v.index : fe.v.index;
    if (u > v) std::swap(a, b);
    selected.push_back(ball.distance(a, b));
  }
  return oracle_detail::sorted_sum(selected);
}

// Independent nearest-in-cone: angle-interval membership via atan2 rather
// than the production cross-product test.
inline std::optional<std::pair<int, double>> nearest_in_cone_scan(
    const UnitBall& ball, const HexFrame& frame, const std::vector<Point>& X,
    Point y, int i) {
  constexpr double kAngularEps = 1e-12;
  double lo = frame.directions[((i % 6) + 6) % 6];
  double hi = frame.directions[(i + 1) % 6];
  double width = hi - lo;
  if (width < 0) width += 2.0 * M_PI;
  std::optional<std::pair<int, double>> best;
  for (int t = 0; t < static_cast<int>(X.size()); ++t) {
    Point d = X[t] - y;
    bool inside;
    if (d.x == 0 && d.y == 0) {
      inside = true;  // the apex belongs to the closed cone
    } else {
      double rel = direction_angle(d) - lo;
      if (rel < 0) rel += 2.0 * M_PI;
      inside = rel <= width + kAngularEps || rel >= 2.0 * M_PI - kAngularEps;
    }
    if (!inside) continue;
    double dist = ball.distance(X[t], y);
    if (!best || dist < best->second) best = {t, dist};
  }
  return best;
}

}  // namespace ksteiner
