#pragma once

// The six-direction frame: boundary points y0..y5 with ||y_i|| = 1 and
// ||y_i - y_{i+1}|| = 1, built by the compass-and-ruler hexagon construction
// with the unit ball in place of the circle. The rays o->y_i split the plane
// into six cones used throughout the partition machinery.

#include <array>
#include <optional>
#include <stdexcept>

#include "ksteiner/geometry.hpp"
#include "ksteiner/unit_ball.hpp"

namespace ksteiner {

struct HexFrame {
  std::array<Point, 6> points;      // y0..y5 on bd(B)
  std::array<double, 6> directions; // angle of o->y_i, in [0, 2*pi)

  Point ray_dir(int i) const { return points[(i % 6 + 6) % 6]; }
};

struct Cone {
  Point apex;
  int lo = 0;  // K(apex, theta_lo, theta_{lo+1})
  const HexFrame* frame = nullptr;
};

// Closed membership: the direction of (p - apex) lies in [theta_i, theta_{i+1}],
// both bounding rays included; the apex itself is contained. Tested with two
// cross-product signs rather than angle comparison (every cone spans < pi).
inline bool cone_contains(const Cone& cone, Point p) {
  Point d = p - cone.apex;
  Point u = cone.frame->ray_dir(cone.lo);
  Point v = cone.frame->ray_dir(cone.lo + 1);
  return cross(u, d) >= 0 && cross(d, v) >= 0;
}

inline bool cone_contains(const HexFrame& frame, Point apex, int i, Point p) {
  return cone_contains(Cone{apex, i, &frame}, p);
}

// y5 = seed; y0 = first intersection of bd(B) and bd(B)+y5 traversing bd(B)
// anticlockwise from y5 (overlap segments contribute their first endpoint);
// y1 = y0 - y5; the rest by central symmetry.
inline HexFrame construct_hex_frame(const UnitBall& ball, Point seed,
                                    double eps = kDefaultEps) {
  if (std::abs(ball.norm(seed) - 1.0) > 1e3 * eps)
    throw std::invalid_argument("construct_hex_frame: seed not on bd(B)");
  Point y5 = seed;
  auto hits = ball.boundary_intersection({0, 0}, y5, eps);
  std::vector<Point> candidates = hits.points;
  for (const Segment& s : hits.overlaps) {
    candidates.push_back(s.a);
    candidates.push_back(s.b);
  }
  if (candidates.empty())
    throw std::runtime_error("construct_hex_frame: no boundary intersection found");

  // bd(B) is star-shaped around o, so anticlockwise traversal order from y5
  // is the increasing direction angle relative to y5.
  double a5 = direction_angle(y5);
  Point y0{};
  double best = std::numeric_limits<double>::infinity();
  for (Point c : candidates) {
    double delta = direction_angle(c) - a5;
    if (delta <= 0) delta += 2.0 * M_PI;
    if (delta < best) {
      best = delta;
      y0 = c;
    }
  }

  HexFrame f;
  f.points[5] = y5;
  f.points[0] = y0;
  f.points[1] = y0 - y5;
  f.points[2] = -y5;
  f.points[3] = -y0;
  f.points[4] = -(y0 - y5);
  for (int i = 0; i < 6; ++i) f.directions[i] = direction_angle(f.points[i]);
  return f;
}

inline HexFrame construct_hex_frame(const UnitBall& ball,
                                    double eps = kDefaultEps) {
  return construct_hex_frame(ball, ball.boundary_point({1, 0}), eps);
}

// Closest terminal to y within cone i (ties by smallest index).
inline std::optional<std::pair<int, double>> nearest_in_cone(
    const UnitBall& ball, const HexFrame& frame, const std::vector<Point>& X,
    Point y, int i) {
  std::optional<std::pair<int, double>> best;
  Cone cone{y, i, &frame};
  for (int t = 0; t < static_cast<int>(X.size()); ++t) {
    if (!cone_contains(cone, X[t])) continue;
    double d = ball.distance(X[t], y);
    if (!best || d < best->second) best = {t, d};
  }
  return best;
}

}  // namespace ksteiner
