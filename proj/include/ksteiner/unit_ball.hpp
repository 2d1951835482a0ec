#pragma once

// Norms represented by their unit balls: centrally symmetric convex polygons
// or ellipses (v'Qv = 1). Distance evaluation, boundary/line and
// boundary/boundary intersection, and boundary traversal order.

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "ksteiner/geometry.hpp"

namespace ksteiner {

struct BallPolygon {
  std::vector<Point> vertices;  // counter-clockwise, centrally symmetric
};

struct BallEllipse {
  // ||v|| = sqrt(v' Q v), Q symmetric positive definite.
  double qxx = 1, qxy = 0, qyy = 1;
};

class UnitBall {
 public:
  static UnitBall polygon(std::vector<Point> vertices, double eps = kDefaultEps) {
    UnitBall b;
    b.shape_ = BallPolygon{std::move(vertices)};
    b.validate(eps);
    b.build_facets();
    return b;
  }

  static UnitBall ellipse(double qxx, double qxy, double qyy,
                          double eps = kDefaultEps) {
    UnitBall b;
    b.shape_ = BallEllipse{qxx, qxy, qyy};
    b.validate(eps);
    return b;
  }

  static UnitBall euclidean() { return ellipse(1, 0, 1); }
  static UnitBall rectilinear() {
    return polygon({{1, 0}, {0, 1}, {-1, 0}, {0, -1}});
  }
  static UnitBall linf() {
    return polygon({{1, 1}, {-1, 1}, {-1, -1}, {1, -1}});
  }

  bool is_polygon() const { return std::holds_alternative<BallPolygon>(shape_); }
  bool is_ellipse() const { return std::holds_alternative<BallEllipse>(shape_); }
  const BallPolygon& polygon_shape() const { return std::get<BallPolygon>(shape_); }
  const BallEllipse& ellipse_shape() const { return std::get<BallEllipse>(shape_); }

  // Gauge of the ball: norm(v) = min { t >= 0 : v in t*B }.
  double norm(Point v) const {
    if (const auto* e = std::get_if<BallEllipse>(&shape_)) {
      double q = e->qxx * v.x * v.x + 2 * e->qxy * v.x * v.y + e->qyy * v.y * v.y;
      return std::sqrt(std::max(0.0, q));
    }
    double best = 0.0;
    for (const Facet& f : facets_) {
      double s = (f.n.x * v.x + f.n.y * v.y) / f.b;
      best = std::max(best, s);
    }
    return best;
  }

  double distance(Point a, Point b) const { return norm(b - a); }

  double area() const {
    if (const auto* e = std::get_if<BallEllipse>(&shape_)) {
      double det = e->qxx * e->qyy - e->qxy * e->qxy;
      return M_PI / std::sqrt(det);
    }
    return ring_area(polygon_shape().vertices);
  }

  // Boundary point of the ball in direction v.
  Point boundary_point(Point v) const {
    double g = norm(v);
    if (g <= 0) throw std::invalid_argument("boundary_point: zero direction");
    return (1.0 / g) * v;
  }

  struct BoundaryIntersections {
    std::vector<Point> points;
    std::vector<Segment> overlaps;  // collinear polygon-facet overlaps
  };

  // Intersections of the line through p,q with bd(B) translated to `center`.
  BoundaryIntersections line_intersection(Point center, Point p, Point q,
                                          double eps = kDefaultEps) const {
    if (p == q) throw std::invalid_argument("line_intersection: degenerate line p=q");
    BoundaryIntersections out;
    Point d = q - p;
    if (const auto* e = std::get_if<BallEllipse>(&shape_)) {
      // (p + t d - c)' Q (p + t d - c) = 1
      Point w = p - center;
      double A = quad(*e, d, d);
      double B = 2 * quad(*e, w, d);
      double C = quad(*e, w, w) - 1.0;
      for (double t : solve_quadratic(A, B, C, eps)) out.points.push_back(p + t * d);
    } else {
      const auto& vs = polygon_shape().vertices;
      std::vector<Point> pts;
      for (std::size_t i = 0, n = vs.size(); i < n; ++i) {
        Point a = vs[i] + center;
        Point b = vs[(i + 1) % n] + center;
        collect_segment_line(a, b, p, d, pts, out.overlaps, eps);
      }
      dedupe(pts, eps);
      out.points = std::move(pts);
    }
    return out;
  }

  // Intersections of bd(B)+c1 with bd(B)+c2.
  BoundaryIntersections boundary_intersection(Point c1, Point c2,
                                              double eps = kDefaultEps) const {
    if (c1 == c2) throw std::invalid_argument("boundary_intersection: identical centers");
    BoundaryIntersections out;
    if (const auto* e = std::get_if<BallEllipse>(&shape_)) {
      // Subtracting the two quadrics leaves a line (the radical axis):
      // 2 (c2-c1)' Q v = c2' Q c2 - c1' Q c1.
      Point g{2 * (e->qxx * (c2.x - c1.x) + e->qxy * (c2.y - c1.y)),
              2 * (e->qxy * (c2.x - c1.x) + e->qyy * (c2.y - c1.y))};
      double rhs = quad(*e, c2, c2) - quad(*e, c1, c1);
      // Parametrize the line g . v = rhs.
      double gn = norm2(g);
      if (gn <= 0) return out;
      Point base = (rhs / (gn * gn)) * g;
      Point dir = perp(g);
      auto hits = line_intersection(c1, base, base + dir, eps);
      for (Point v : hits.points) {
        if (std::abs(norm(v - c2) - 1.0) <= 64 * eps) out.points.push_back(v);
      }
      dedupe(out.points, eps);
    } else {
      const auto& vs = polygon_shape().vertices;
      std::size_t n = vs.size();
      std::vector<Point> pts;
      for (std::size_t i = 0; i < n; ++i) {
        Point a1 = vs[i] + c1, b1 = vs[(i + 1) % n] + c1;
        for (std::size_t j = 0; j < n; ++j) {
          Point a2 = vs[j] + c2, b2 = vs[(j + 1) % n] + c2;
          collect_segment_segment(a1, b1, a2, b2, pts, out.overlaps, eps);
        }
      }
      dedupe(pts, eps);
      out.points = std::move(pts);
    }
    return out;
  }

 private:
  struct Facet {
    Point n;   // outward normal (unnormalized)
    double b;  // support value, n . x = b on the facet line, b > 0
  };

  std::variant<BallPolygon, BallEllipse> shape_;
  std::vector<Facet> facets_;

  static double quad(const BallEllipse& e, Point u, Point v) {
    return e.qxx * u.x * v.x + e.qxy * (u.x * v.y + u.y * v.x) + e.qyy * u.y * v.y;
  }

  static std::vector<double> solve_quadratic(double A, double B, double C,
                                             double eps) {
    std::vector<double> ts;
    if (std::abs(A) < 1e-300) {
      if (std::abs(B) > 1e-300) ts.push_back(-C / B);
      return ts;
    }
    double disc = B * B - 4 * A * C;
    double scale = std::max({std::abs(B * B), std::abs(4 * A * C), 1e-300});
    if (disc < -eps * scale) return ts;
    if (disc < 0) disc = 0;
    double sd = std::sqrt(disc);
    // Numerically stable split of the two roots.
    double qq = -0.5 * (B + (B >= 0 ? sd : -sd));
    double t0 = qq / A;
    double t1 = (qq != 0) ? C / qq : t0;
    ts.push_back(t0);
    if (std::abs(t1 - t0) > 0) ts.push_back(t1);
    return ts;
  }

  // Intersection of segment [a,b] with the infinite line p + t*d.
  static void collect_segment_line(Point a, Point b, Point p, Point d,
                                   std::vector<Point>& pts,
                                   std::vector<Segment>& overlaps, double eps) {
    Point ab = b - a;
    double denom = cross(d, ab);
    double scale = std::max(norm2(d) * norm2(ab), 1e-300);
    if (std::abs(denom) <= eps * scale) {
      // Parallel; collinear iff a lies on the line.
      if (std::abs(cross(d, a - p)) <= eps * std::max(norm2(d) * norm2(a - p), 1.0))
        overlaps.push_back({a, b});
      return;
    }
    double s = cross(d, p - a) / denom;  // position along [a,b]
    if (s >= -eps && s <= 1 + eps) pts.push_back(a + std::clamp(s, 0.0, 1.0) * ab);
  }

  static void collect_segment_segment(Point a1, Point b1, Point a2, Point b2,
                                      std::vector<Point>& pts,
                                      std::vector<Segment>& overlaps, double eps) {
    Point d1 = b1 - a1, d2 = b2 - a2;
    double denom = cross(d1, d2);
    double scale = std::max(norm2(d1) * norm2(d2), 1e-300);
    if (std::abs(denom) <= eps * scale) {
      if (std::abs(cross(d1, a2 - a1)) > eps * std::max(norm2(d1) * norm2(a2 - a1), 1.0))
        return;  // parallel, not collinear
      // Collinear: project onto d1 and intersect parameter ranges.
      double len2 = dot(d1, d1);
      double t0 = dot(a2 - a1, d1) / len2;
      double t1 = dot(b2 - a1, d1) / len2;
      if (t0 > t1) std::swap(t0, t1);
      double lo = std::max(0.0, t0), hi = std::min(1.0, t1);
      if (hi - lo > eps) {
        overlaps.push_back({a1 + lo * d1, a1 + hi * d1});
      } else if (hi - lo > -eps) {
        pts.push_back(a1 + 0.5 * (lo + hi) * d1);
      }
      return;
    }
    double t = cross(a2 - a1, d2) / denom;
    double u = cross(a2 - a1, d1) / denom;
    if (t >= -eps && t <= 1 + eps && u >= -eps && u <= 1 + eps)
      pts.push_back(a1 + std::clamp(t, 0.0, 1.0) * d1);
  }

  static void dedupe(std::vector<Point>& pts, double eps) {
    std::vector<Point> out;
    for (Point p : pts) {
      bool dup = false;
      for (Point q : out)
        if (norm2(p - q) <= 16 * eps) { dup = true; break; }
      if (!dup) out.push_back(p);
    }
    pts = std::move(out);
  }

  void build_facets() {
    facets_.clear();
    const auto& vs = polygon_shape().vertices;
    for (std::size_t i = 0, n = vs.size(); i < n; ++i) {
      Point a = vs[i], b = vs[(i + 1) % n];
      Point e = b - a;
      Point nrm{e.y, -e.x};  // outward for CCW winding
      facets_.push_back({nrm, dot(nrm, a)});
    }
  }

  void validate(double eps) const {
    if (const auto* e = std::get_if<BallEllipse>(&shape_)) {
      if (!std::isfinite(e->qxx) || !std::isfinite(e->qxy) || !std::isfinite(e->qyy))
        throw std::invalid_argument("ellipse: non-finite Q");
      if (e->qxx <= 0 || e->qxx * e->qyy - e->qxy * e->qxy <= 0)
        throw std::invalid_argument("ellipse: Q must be positive definite");
      return;
    }
    const auto& vs = polygon_shape().vertices;
    std::size_t n = vs.size();
    if (n < 4) throw std::invalid_argument("polygon ball: needs >= 4 vertices");
    if (n % 2 != 0) throw std::invalid_argument("polygon ball: centrally symmetric balls have an even vertex count");
    for (Point v : vs)
      if (!finite(v)) throw std::invalid_argument("polygon ball: non-finite vertex");
    for (std::size_t i = 0; i < n; ++i) {
      Point a = vs[i], b = vs[(i + 1) % n], c = vs[(i + 2) % n];
      double cr = cross(b - a, c - b);
      if (cr <= eps) throw std::invalid_argument(
          "polygon ball: vertices must be strictly convex in CCW order");
    }
    for (std::size_t i = 0; i < n; ++i) {
      Point v = vs[i], w = vs[(i + n / 2) % n];
      if (norm2(v + w) > 1e4 * eps * std::max(1.0, norm2(v)))
        throw std::invalid_argument("polygon ball: not centrally symmetric");
    }
    // Origin strictly interior follows from central symmetry + convexity,
    // but check support values anyway.
    for (std::size_t i = 0; i < n; ++i) {
      Point a = vs[i], b = vs[(i + 1) % n];
      Point e2 = b - a;
      Point nrm{e2.y, -e2.x};
      if (dot(nrm, a) <= eps) throw std::invalid_argument(
          "polygon ball: origin not strictly interior");
    }
  }
};

}  // namespace ksteiner
