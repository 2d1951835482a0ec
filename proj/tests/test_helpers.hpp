#pragma once

// Shared generators for the test suites: random centrally symmetric polygon
// balls, random ellipse balls, random point sets, random viable forests.

#include <algorithm>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "ksteiner/geometry.hpp"
#include "ksteiner/unit_ball.hpp"
#include "ksteiner/viable_forest.hpp"

namespace ksteiner::testing {

inline std::vector<Point> convex_hull(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Point> hull;
  auto build = [&](auto begin, auto end) {
    std::size_t base = hull.size();
    for (auto it = begin; it != end; ++it) {
      while (hull.size() >= base + 2 &&
             cross(hull.back() - hull[hull.size() - 2], *it - hull.back()) <= 1e-12)
        hull.pop_back();
      hull.push_back(*it);
    }
    hull.pop_back();
  };
  build(pts.begin(), pts.end());
  build(pts.rbegin(), pts.rend());
  return hull;  // counter-clockwise
}

inline UnitBall random_polygon_ball(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> halfn(2, 6);
  std::uniform_real_distribution<double> ang(0.02, M_PI - 0.02);
  std::uniform_real_distribution<double> rad(0.4, 1.6);
  for (int attempt = 0; attempt < 100; ++attempt) {
    int m = halfn(rng);
    std::vector<Point> pts;
    for (int i = 0; i < m; ++i) {
      double a = ang(rng), r = rad(rng);
      Point p{r * std::cos(a), r * std::sin(a)};
      pts.push_back(p);
      pts.push_back(-p);
    }
    std::vector<Point> hull = convex_hull(pts);
    if (hull.size() < 4 || hull.size() % 2 != 0) continue;
    try {
      return UnitBall::polygon(hull);
    } catch (const std::invalid_argument&) {
      continue;
    }
  }
  return UnitBall::rectilinear();
}

inline UnitBall random_ellipse_ball(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> eig(0.3, 4.0);
  std::uniform_real_distribution<double> rot(0.0, M_PI);
  double a = eig(rng), b = eig(rng), phi = rot(rng);
  double c = std::cos(phi), s = std::sin(phi);
  // Q = R diag(a,b) R^T
  double qxx = a * c * c + b * s * s;
  double qxy = (a - b) * c * s;
  double qyy = a * s * s + b * c * c;
  return UnitBall::ellipse(qxx, qxy, qyy);
}

inline UnitBall random_ball(std::mt19937_64& rng) {
  return (rng() & 1) ? random_polygon_ball(rng) : random_ellipse_ball(rng);
}

inline std::vector<Point> random_points(std::mt19937_64& rng, int n, double lo = 0.0,
                                        double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<Point> pts;
  pts.reserve(n);
  for (int i = 0; i < n; ++i) pts.push_back({u(rng), u(rng)});
  return pts;
}

inline Point random_boundary_point(std::mt19937_64& rng, const UnitBall& ball) {
  std::uniform_real_distribution<double> ang(0.0, 2 * M_PI);
  double a = ang(rng);
  return ball.boundary_point({std::cos(a), std::sin(a)});
}

// Random viable forest over terminals 0..n-1: <= max_comps components,
// <= max_steiner steiner nodes overall, disjoint attachment sets.
inline std::optional<ViableForest> random_viable_forest(std::mt19937_64& rng,
                                                        const std::vector<Point>& X,
                                                        int max_comps,
                                                        int max_steiner) {
  const int n = static_cast<int>(X.size());
  std::vector<int> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  std::shuffle(pool.begin(), pool.end(), rng);
  std::size_t pool_at = 0;

  ViableForest f;
  int comps = 1 + static_cast<int>(rng() % max_comps);
  int steiner_left = std::min(max_steiner, comps + static_cast<int>(rng() % max_steiner));
  std::uniform_real_distribution<double> u(-0.2, 1.2);
  for (int c = 0; c < comps && steiner_left > 0; ++c) {
    int m = 1 + static_cast<int>(rng() % steiner_left);
    if (c + 1 < comps) m = std::min(m, steiner_left - (comps - c - 1));
    steiner_left -= m;
    int base = static_cast<int>(f.steiner.size());
    for (int s = 0; s < m; ++s) f.steiner.push_back({u(rng), u(rng)});
    std::vector<int> ss_deg(m, 0);
    for (int s = 1; s < m; ++s) {
      int p = static_cast<int>(rng() % s);
      f.edges.push_back({steiner_ref(base + p), steiner_ref(base + s)});
      ++ss_deg[p];
      ++ss_deg[s];
    }
    for (int s = 0; s < m; ++s) {
      int need = std::max(0, 2 - ss_deg[s]);
      int room = 6 - ss_deg[s];
      int extra = room > need ? static_cast<int>(rng() % (room - need + 1)) : 0;
      int want = need + extra;
      if (s == 0 && m == 1) want = std::max(want, 2);
      for (int a = 0; a < want; ++a) {
        if (pool_at >= pool.size()) return std::nullopt;
        f.edges.push_back({terminal_ref(pool[pool_at++]), steiner_ref(base + s)});
      }
    }
  }
  if (!is_viable(f, n)) return std::nullopt;
  return f;
}

}  // namespace ksteiner::testing
