#pragma once

// Bisectors. Two layers: the plain norm bisector (the equidistance set of two
// points under the ball norm, computed per pair of gauge-linearity cones), and
// the sector-based dominance bisector separating {delta_C(p,.) <= delta_C(q,.)}
// from its complement, assembled from equidistance pieces and cone-limit rays.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ksteiner/arrangement.hpp"
#include "ksteiner/clip.hpp"
#include "ksteiner/geometry.hpp"
#include "ksteiner/sector.hpp"
#include "ksteiner/unit_ball.hpp"

namespace ksteiner {

struct NormBisector {
  std::vector<Segment> equidistant;     // 1-D equidistance pieces
  std::vector<Segment> tie_boundaries;  // rims of 2-D equidistant regions
};

// Equidistance set { y : ||y-p|| = ||y-q|| } clipped to the box. A straight
// line for ellipse norms; piecewise linear (possibly with two-dimensional tie
// regions between facet-parallel pairs) for polygonal norms.
inline NormBisector norm_bisector(const UnitBall& ball, Point p, Point q,
                                  const Box& box, double eps = kDefaultEps) {
  if (p == q) throw std::invalid_argument("norm_bisector: identical points");
  NormBisector out;
  double span = box.diagonal();

  if (ball.is_ellipse()) {
    const auto& e = ball.ellipse_shape();
    Point d = q - p;
    Point a{2 * (e.qxx * d.x + e.qxy * d.y), 2 * (e.qxy * d.x + e.qyy * d.y)};
    double qq = e.qxx * q.x * q.x + 2 * e.qxy * q.x * q.y + e.qyy * q.y * q.y;
    double pp = e.qxx * p.x * p.x + 2 * e.qxy * p.x * p.y + e.qyy * p.y * p.y;
    double c = qq - pp;
    double an = norm2(a);
    if (an <= 0) return out;
    Point base = (c / (an * an)) * a;
    Point u = (1.0 / an) * perp(a);
    base = base + dot(box.center() - base, u) * u;  // re-anchor near the box
    Segment big{base - (4 * span) * u, base + (4 * span) * u};
    if (auto s = clip_segment(big, box_halfplanes(box))) {
      if (norm2(s->b - s->a) > eps) out.equidistant.push_back(*s);
    }
    return out;
  }

  const auto& vs = ball.polygon_shape().vertices;
  const std::size_t nv = vs.size();
  auto facet = [&](std::size_t i, Point center) {
    // Linear form of the gauge on the cone spanned by vertices v_i, v_{i+1}:
    // L(y) = n_i . (y - center) / b_i.
    Point va = vs[i], vb = vs[(i + 1) % nv];
    Point edge = vb - va;
    Point n{edge.y, -edge.x};
    double b = dot(n, va);
    return std::pair<Point, double>{(1.0 / b) * n, dot((1.0 / b) * n, center)};
  };

  std::vector<Point> boxpoly = box_polygon(box);
  for (std::size_t i = 0; i < nv; ++i) {
    for (std::size_t j = 0; j < nv; ++j) {
      std::vector<HalfPlane> hps = wedge_halfplanes(p, vs[i], vs[(i + 1) % nv]);
      auto hq = wedge_halfplanes(q, vs[j], vs[(j + 1) % nv]);
      hps.insert(hps.end(), hq.begin(), hq.end());
      std::vector<Point> cell = clip_polygon(boxpoly, hps);
      if (cell.size() < 3 || std::abs(ring_area(cell)) < eps * eps) continue;

      auto [ap, cp] = facet(i, p);
      auto [aq, cq] = facet(j, q);
      Point grad = ap - aq;
      double rhs = cp - cq;  // zero set: grad . y = rhs
      double gscale = norm2(ap) + norm2(aq);
      std::vector<HalfPlane> cell_hps;
      for (std::size_t k = 0; k < cell.size(); ++k)
        cell_hps.push_back({cell[k], cell[(k + 1) % cell.size()] - cell[k]});

      if (norm2(grad) <= 1e-12 * gscale) {
        // Gauge difference constant on the cell; zero means a 2-D tie region.
        Point rep{0, 0};
        for (Point v : cell) rep = rep + v;
        rep = (1.0 / cell.size()) * rep;
        if (std::abs(ball.norm(rep - p) - ball.norm(rep - q)) <= eps * std::max(1.0, span)) {
          for (std::size_t k = 0; k < cell.size(); ++k)
            out.tie_boundaries.push_back({cell[k], cell[(k + 1) % cell.size()]});
        }
        continue;
      }
      double gn = norm2(grad);
      Point base = (rhs / (gn * gn)) * grad;
      Point u = (1.0 / gn) * perp(grad);
      base = base + dot(box.center() - base, u) * u;
      Segment big{base - (4 * span) * u, base + (4 * span) * u};
      if (auto s = clip_segment(big, cell_hps)) {
        if (norm2(s->b - s->a) > eps) out.equidistant.push_back(*s);
      }
    }
  }
  return out;
}

// Visibility wedge of x under the sector: { y : delta_C(x, y) < infinity }
// = K(x, dir_lo, dir_hi) with the sector's own directions.
inline std::vector<HalfPlane> visibility_halfplanes(const SectorShape& sector,
                                                    Point x) {
  return wedge_halfplanes(x, sector.dir_lo, sector.dir_hi);
}

inline std::vector<Segment> visibility_rays(const SectorShape& sector, Point x,
                                            const Box& box) {
  std::vector<Segment> out;
  if (auto s = clip_ray_to_box(x, sector.dir_lo, box)) out.push_back(*s);
  if (auto s = clip_ray_to_box(x, sector.dir_hi, box)) out.push_back(*s);
  return out;
}

// Equidistance pieces of the pair (p,q) restricted to the common visibility
// wedge, plus tie-region rims. These are the only places the pair's relative
// order can flip while both stay visible.
inline std::vector<Segment> equidistance_candidates(const SectorShape& sector,
                                                    Point p, Point q,
                                                    const Box& box,
                                                    double eps = kDefaultEps) {
  const UnitBall& ball = *sector.ball;
  NormBisector nb = norm_bisector(ball, p, q, box, eps);
  std::vector<HalfPlane> common = visibility_halfplanes(sector, p);
  auto vq = visibility_halfplanes(sector, q);
  common.insert(common.end(), vq.begin(), vq.end());

  std::vector<Segment> cands;
  for (const Segment& s : nb.equidistant)
    if (auto c = clip_segment(s, common))
      if (norm2(c->b - c->a) > eps) cands.push_back(*c);
  for (const Segment& s : nb.tie_boundaries)
    if (auto c = clip_segment(s, common))
      if (norm2(c->b - c->a) > eps) cands.push_back(*c);
  return cands;
}

// Candidate boundary segments for the dominance structure of the pair (p,q):
// equidistance pieces plus both cone-limit rays.
inline std::vector<Segment> dominance_candidates(const SectorShape& sector,
                                                 Point p, Point q, const Box& box,
                                                 double eps = kDefaultEps) {
  std::vector<Segment> cands = equidistance_candidates(sector, p, q, box, eps);
  for (const Segment& s : visibility_rays(sector, p, box)) cands.push_back(s);
  for (const Segment& s : visibility_rays(sector, q, box)) cands.push_back(s);
  return cands;
}

struct Bisector {
  Point p, q;
  std::vector<std::vector<Point>> polylines;
  std::vector<Segment> segments;
};

namespace detail {

inline bool on_box_rim(Point a, Point b, const Box& box, double eps) {
  auto on_side = [&](double va, double vb, double lim) {
    return std::abs(va - lim) <= eps && std::abs(vb - lim) <= eps;
  };
  return on_side(a.x, b.x, box.xmin) || on_side(a.x, b.x, box.xmax) ||
         on_side(a.y, b.y, box.ymin) || on_side(a.y, b.y, box.ymax);
}

inline std::vector<std::vector<Point>> chain_segments(
    const std::vector<Segment>& segs, double weld) {
  PlanarGraph g = split_segments(segs, weld);
  std::vector<std::vector<int>> adj(g.vertices.size());
  std::vector<char> used(g.edges.size(), 0);
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    adj[g.edges[e].first].push_back(static_cast<int>(e));
    adj[g.edges[e].second].push_back(static_cast<int>(e));
  }
  auto walk = [&](int start_vertex) {
    std::vector<Point> line{g.vertices[start_vertex]};
    int v = start_vertex;
    while (true) {
      int next_e = -1;
      for (int e : adj[v])
        if (!used[e]) { next_e = e; break; }
      if (next_e < 0) break;
      used[next_e] = 1;
      v = g.edges[next_e].first == v ? g.edges[next_e].second
                                     : g.edges[next_e].first;
      line.push_back(g.vertices[v]);
    }
    return line;
  };
  std::vector<std::vector<Point>> lines;
  // Paths first (odd-degree endpoints), then leftover cycles.
  for (std::size_t v = 0; v < adj.size(); ++v) {
    int open = 0;
    for (int e : adj[v]) open += used[e] ? 0 : 1;
    if (open % 2 == 1) {
      auto line = walk(static_cast<int>(v));
      if (line.size() > 1) lines.push_back(std::move(line));
    }
  }
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    if (used[e]) continue;
    auto line = walk(g.edges[e].first);
    if (line.size() > 1) lines.push_back(std::move(line));
  }
  return lines;
}

}  // namespace detail

// The piecewise-linear boundary separating { y : delta_C(p,y) <= delta_C(q,y) }
// from its complement (infinities compare equal), clipped to the box.
inline Bisector bisector(const SectorShape& sector, Point p, Point q,
                         const Box& box, double eps = kDefaultEps) {
  if (p == q) throw std::invalid_argument("bisector: identical points");
  Bisector out;
  out.p = p;
  out.q = q;
  double scale = box.diagonal();
  double weld = eps * std::max(1.0, scale);
  double probe = std::max(1024 * weld, 1e-7 * std::max(1.0, scale));

  auto dominates = [&](Point y) {
    return convex_distance(sector, p, y) <= convex_distance(sector, q, y) ? 1 : 0;
  };
  std::vector<Segment> cands = dominance_candidates(sector, p, q, box, eps);
  std::vector<Segment> kept =
      realized_boundary(cands, box, weld, probe, dominates);
  std::vector<Segment> inner;
  for (const Segment& s : kept)
    if (!detail::on_box_rim(s.a, s.b, box, weld)) inner.push_back(s);
  out.segments = inner;
  out.polylines = detail::chain_segments(inner, weld);
  return out;
}

}  // namespace ksteiner
