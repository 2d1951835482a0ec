#pragma once

// Basic planar primitives shared by every module: points, segments,
// axis-aligned boxes and the tolerance policy.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

namespace ksteiner {

inline constexpr double kDefaultEps = 1e-9;

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
  friend Point operator*(Point a, double s) { return {s * a.x, s * a.y}; }
  friend Point operator-(Point a) { return {-a.x, -a.y}; }
  friend bool operator==(Point a, Point b) { return a.x == b.x && a.y == b.y; }
  friend bool operator!=(Point a, Point b) { return !(a == b); }
  friend bool operator<(Point a, Point b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  }
};

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm2_sq(Point a) { return dot(a, a); }
inline double norm2(Point a) { return std::hypot(a.x, a.y); }
inline Point perp(Point a) { return {-a.y, a.x}; }

inline bool finite(Point p) { return std::isfinite(p.x) && std::isfinite(p.y); }

// Direction angle in [0, 2*pi).
inline double direction_angle(Point v) {
  double a = std::atan2(v.y, v.x);
  if (a < 0) a += 2.0 * M_PI;
  return a;
}

struct Segment {
  Point a;
  Point b;

  Point at(double t) const { return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)}; }
  Point midpoint() const { return at(0.5); }
  double length() const { return norm2(b - a); }
};

struct Box {
  double xmin = 0, ymin = 0, xmax = 0, ymax = 0;

  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
  double diagonal() const { return std::hypot(width(), height()); }
  double area() const { return width() * height(); }
  Point center() const { return {(xmin + xmax) / 2, (ymin + ymax) / 2}; }

  bool contains(Point p, double eps = 0.0) const {
    return p.x >= xmin - eps && p.x <= xmax + eps && p.y >= ymin - eps &&
           p.y <= ymax + eps;
  }
  Box inflated(double m) const { return {xmin - m, ymin - m, xmax + m, ymax + m}; }

  std::array<Point, 4> corners() const {
    return {Point{xmin, ymin}, Point{xmax, ymin}, Point{xmax, ymax}, Point{xmin, ymax}};
  }
  std::array<Segment, 4> edges() const {
    auto c = corners();
    return {Segment{c[0], c[1]}, Segment{c[1], c[2]}, Segment{c[2], c[3]},
            Segment{c[3], c[0]}};
  }

  static Box bounding(const std::vector<Point>& pts) {
    if (pts.empty()) throw std::invalid_argument("Box::bounding: empty point set");
    Box b{pts[0].x, pts[0].y, pts[0].x, pts[0].y};
    for (const Point& p : pts) {
      b.xmin = std::min(b.xmin, p.x);
      b.ymin = std::min(b.ymin, p.y);
      b.xmax = std::max(b.xmax, p.x);
      b.ymax = std::max(b.ymax, p.y);
    }
    return b;
  }
};

// One absolute epsilon near unit scale, scaled relatively beyond it.
struct Tolerance {
  double base = kDefaultEps;
  double at_scale(double scale) const { return base * std::max(1.0, std::abs(scale)); }
};

// Signed area of a closed ring (positive for counter-clockwise).
inline double ring_area(const std::vector<Point>& ring) {
  double s = 0.0;
  for (std::size_t i = 0, n = ring.size(); i < n; ++i) {
    const Point& p = ring[i];
    const Point& q = ring[(i + 1) % n];
    s += cross(p, q);
  }
  return 0.5 * s;
}

// Crossing-number point-in-ring test; points on the boundary count as inside.
inline bool point_in_ring(const std::vector<Point>& ring, Point p, double eps) {
  bool inside = false;
  for (std::size_t i = 0, n = ring.size(); i < n; ++i) {
    Point a = ring[i];
    Point b = ring[(i + 1) % n];
    Point ab = b - a;
    double len = norm2(ab);
    if (len > 0) {
      double t = dot(p - a, ab) / (len * len);
      if (t >= 0 && t <= 1) {
        Point foot = a + t * ab;
        if (norm2(p - foot) <= eps) return true;
      }
    }
    bool crosses = (a.y > p.y) != (b.y > p.y);
    if (crosses) {
      double xint = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
      if (xint > p.x) inside = !inside;
    }
  }
  return inside;
}

}  // namespace ksteiner
