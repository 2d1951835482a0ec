#pragma once

// Convex clipping helpers: halfplane/polygon clipping (Sutherland-Hodgman),
// segment-vs-convex-polygon clipping, and ray-to-box truncation.

#include <optional>
#include <vector>

#include "ksteiner/geometry.hpp"

namespace ksteiner {

struct HalfPlane {
  // Keeps { p : cross(dir, p - base) >= 0 }  (the left side of base->dir).
  Point base;
  Point dir;
  double side(Point p) const { return cross(dir, p - base); }
};

inline std::vector<Point> clip_polygon(const std::vector<Point>& poly,
                                       const HalfPlane& hp) {
  std::vector<Point> out;
  std::size_t n = poly.size();
  if (n == 0) return out;
  for (std::size_t i = 0; i < n; ++i) {
    Point a = poly[i], b = poly[(i + 1) % n];
    double sa = hp.side(a), sb = hp.side(b);
    if (sa >= 0) out.push_back(a);
    if ((sa < 0) != (sb < 0)) {
      double t = sa / (sa - sb);
      out.push_back(a + t * (b - a));
    }
  }
  return out;
}

inline std::vector<Point> clip_polygon(std::vector<Point> poly,
                                       const std::vector<HalfPlane>& hps) {
  for (const HalfPlane& hp : hps) {
    poly = clip_polygon(poly, hp);
    if (poly.empty()) break;
  }
  return poly;
}

inline std::vector<Point> box_polygon(const Box& box) {
  auto c = box.corners();
  return {c[0], c[1], c[2], c[3]};
}

// Clip segment to the intersection of halfplanes; returns the surviving piece.
inline std::optional<Segment> clip_segment(const Segment& s,
                                           const std::vector<HalfPlane>& hps) {
  double t0 = 0.0, t1 = 1.0;
  Point d = s.b - s.a;
  for (const HalfPlane& hp : hps) {
    double fa = hp.side(s.a);
    double fb = hp.side(s.b);
    double denom = fa - fb;  // linear in t: f(t) = fa + t (fb - fa)
    if (std::abs(denom) < 1e-300) {
      if (fa < 0) return std::nullopt;
      continue;
    }
    double t = fa / denom;
    if (fb - fa > 0) {
      t0 = std::max(t0, t);  // entering
    } else {
      t1 = std::min(t1, t);  // leaving
    }
    if (t0 > t1) return std::nullopt;
  }
  return Segment{s.at(t0), s.at(t1)};
}

inline std::vector<HalfPlane> box_halfplanes(const Box& box) {
  return {HalfPlane{{box.xmin, box.ymin}, {1, 0}},
          HalfPlane{{box.xmax, box.ymin}, {0, 1}},
          HalfPlane{{box.xmax, box.ymax}, {-1, 0}},
          HalfPlane{{box.xmin, box.ymax}, {0, -1}}};
}

// The wedge K(apex, dir_lo, dir_hi) as two halfplanes (angular width < pi).
inline std::vector<HalfPlane> wedge_halfplanes(Point apex, Point dir_lo,
                                               Point dir_hi) {
  return {HalfPlane{apex, dir_lo}, HalfPlane{apex, -dir_hi}};
}

// Truncate the ray apex + t*dir (t >= 0) to the box; nullopt if it misses.
inline std::optional<Segment> clip_ray_to_box(Point apex, Point dir, const Box& box) {
  double t0 = 0.0, t1 = std::numeric_limits<double>::infinity();
  auto axis = [&](double p, double d, double lo, double hi) {
    if (std::abs(d) < 1e-300) return p >= lo && p <= hi;
    double ta = (lo - p) / d, tb = (hi - p) / d;
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    return t0 <= t1;
  };
  if (!axis(apex.x, dir.x, box.xmin, box.xmax)) return std::nullopt;
  if (!axis(apex.y, dir.y, box.ymin, box.ymax)) return std::nullopt;
  if (t0 > t1) return std::nullopt;
  return Segment{apex + t0 * dir, apex + t1 * dir};
}

}  // namespace ksteiner
