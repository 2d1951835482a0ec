#pragma once

// Wavefront shape of the i-th ODC partition: the sector
// C' = B cut with the reflected cone K(o, 180+theta_i, 180+theta_{i+1}), and the convex distance
// delta_C based on it. Central symmetry of B makes delta_C(x, y) equal the
// ball norm whenever y - x points into the sector's cone, +infinity otherwise.

#include <cmath>
#include <limits>
#include <vector>

#include "ksteiner/geometry.hpp"
#include "ksteiner/hex_frame.hpp"
#include "ksteiner/unit_ball.hpp"

namespace ksteiner {

struct SectorShape {
  const UnitBall* ball = nullptr;
  HexFrame frame;
  int index = 0;
  Point dir_lo;  // -y_i
  Point dir_hi;  // -y_{i+1}

  bool cone_contains_dir(Point d) const {
    return cross(dir_lo, d) >= 0 && cross(d, dir_hi) >= 0;
  }

  // Vertex chain o, dir_lo, ..., dir_hi for polygonal balls (the arc replaced
  // by the ball's own vertices); for ellipse balls only the straight sides.
  std::vector<Point> polygon_chain() const {
    std::vector<Point> chain{{0, 0}, dir_lo};
    if (ball->is_polygon()) {
      const auto& vs = ball->polygon_shape().vertices;
      double a0 = direction_angle(dir_lo);
      std::vector<std::pair<double, Point>> mid;
      for (Point v : vs) {
        if (!cone_contains_dir(v)) continue;
        if (norm2(v - dir_lo) < 1e-12 || norm2(v - dir_hi) < 1e-12) continue;
        double d = direction_angle(v) - a0;
        if (d < 0) d += 2.0 * M_PI;
        mid.push_back({d, v});
      }
      std::sort(mid.begin(), mid.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      for (auto& [d, v] : mid) chain.push_back(v);
    }
    chain.push_back(dir_hi);
    return chain;
  }

  double area() const {
    if (ball->is_polygon()) return ring_area(polygon_chain());
    const auto& e = ball->ellipse_shape();
    double det = e.qxx * e.qyy - e.qxy * e.qxy;
    double sd = std::sqrt(det);
    // Principal square root of Q maps the ellipse onto the unit disk.
    double denom = std::sqrt(e.qxx + e.qyy + 2 * sd);
    double mxx = (e.qxx + sd) / denom, mxy = e.qxy / denom, myy = (e.qyy + sd) / denom;
    auto map = [&](Point p) { return Point{mxx * p.x + mxy * p.y, mxy * p.x + myy * p.y}; };
    double phi = direction_angle(map(dir_hi)) - direction_angle(map(dir_lo));
    if (phi < 0) phi += 2.0 * M_PI;
    return phi / (2.0 * sd);
  }
};

inline SectorShape sector_shape(const UnitBall& ball, const HexFrame& frame, int i) {
  SectorShape s;
  s.ball = &ball;
  s.frame = frame;
  s.index = ((i % 6) + 6) % 6;
  s.dir_lo = -frame.points[s.index];
  s.dir_hi = -frame.points[(s.index + 1) % 6];
  return s;
}

// delta_C(from, to) = inf{ 1/lambda : lambda (to - from) in C }.
inline double convex_distance(const SectorShape& sector, Point from, Point to) {
  Point d = to - from;
  if (d.x == 0 && d.y == 0) return 0.0;
  if (!sector.cone_contains_dir(d)) return std::numeric_limits<double>::infinity();
  return sector.ball->norm(d);
}

}  // namespace ksteiner
