#pragma once

// Planar subdivision machinery: split a set of segments at every mutual
// intersection (snap-rounding nearby points onto shared vertices), then
// extract faces from the resulting planar graph by half-edge traversal with
// angular sorting at the vertices. Faces may carry holes (boundary cycles of
// components floating inside them).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ksteiner/geometry.hpp"

namespace ksteiner {

namespace detail {

// Hash grid used to weld nearby points onto canonical vertices.
class WeldGrid {
 public:
  explicit WeldGrid(double cell) : cell_(std::max(cell, 1e-300)) {}

  int insert(Point p, std::vector<Point>& verts, double weld) {
    auto [cx, cy] = cell_of(p);
    for (long long dx = -1; dx <= 1; ++dx)
      for (long long dy = -1; dy <= 1; ++dy) {
        auto it = cells_.find(key(cx + dx, cy + dy));
        if (it == cells_.end()) continue;
        for (int id : it->second)
          if (norm2(verts[id] - p) <= weld) return id;
      }
    int id = static_cast<int>(verts.size());
    verts.push_back(p);
    cells_[key(cx, cy)].push_back(id);
    return id;
  }

 private:
  double cell_;
  std::unordered_map<std::uint64_t, std::vector<int>> cells_;

  long long coord(double v) const {
    return static_cast<long long>(std::floor(v / cell_));
  }
  std::pair<long long, long long> cell_of(Point p) const {
    return {coord(p.x), coord(p.y)};
  }
  static std::uint64_t key(long long x, long long y) {
    return static_cast<std::uint64_t>(x) * 0x9E3779B97F4A7C15ull ^
           static_cast<std::uint64_t>(y);
  }
};

inline bool segment_intersections(Point a1, Point b1, Point a2, Point b2,
                                  double eps, Point out[2], int& count) {
  count = 0;
  Point d1 = b1 - a1, d2 = b2 - a2;
  double denom = cross(d1, d2);
  double scale = std::max(norm2(d1) * norm2(d2), 1e-300);
  if (std::abs(denom) <= 1e-14 * scale) {
    // Parallel. Collinear overlap contributes its endpoints.
    double off = cross(d1, a2 - a1);
    if (std::abs(off) > eps * std::max(norm2(d1), 1e-300)) return false;
    double len2 = dot(d1, d1);
    if (len2 <= 0) return false;
    double t0 = dot(a2 - a1, d1) / len2;
    double t1 = dot(b2 - a1, d1) / len2;
    if (t0 > t1) std::swap(t0, t1);
    double lo = std::max(0.0, t0), hi = std::min(1.0, t1);
    if (lo > hi) return false;
    out[count++] = a1 + lo * d1;
    if (hi > lo) out[count++] = a1 + hi * d1;
    return true;
  }
  double t = cross(a2 - a1, d2) / denom;
  double u = cross(a2 - a1, d1) / denom;
  double tol_t = eps / std::max(norm2(d1), 1e-300);
  double tol_u = eps / std::max(norm2(d2), 1e-300);
  if (t < -tol_t || t > 1 + tol_t || u < -tol_u || u > 1 + tol_u) return false;
  out[count++] = a1 + std::clamp(t, 0.0, 1.0) * d1;
  return true;
}

}  // namespace detail

struct PlanarGraph {
  std::vector<Point> vertices;
  std::vector<std::pair<int, int>> edges;  // canonical u < v
};

// Split segments at all mutual intersections; weld vertices within `weld`.
inline PlanarGraph split_segments(const std::vector<Segment>& segs, double weld) {
  PlanarGraph g;
  detail::WeldGrid grid(std::max(weld * 4, 1e-12));

  std::vector<Segment> ss;
  ss.reserve(segs.size());
  for (const Segment& s : segs)
    if (norm2(s.b - s.a) > weld) ss.push_back(s);

  const int m = static_cast<int>(ss.size());
  std::vector<std::vector<Point>> cuts(m);
  for (int i = 0; i < m; ++i) {
    cuts[i].push_back(ss[i].a);
    cuts[i].push_back(ss[i].b);
  }

  // Bounding boxes for the pair rejection test.
  std::vector<std::array<double, 4>> bb(m);
  for (int i = 0; i < m; ++i)
    bb[i] = {std::min(ss[i].a.x, ss[i].b.x) - weld, std::min(ss[i].a.y, ss[i].b.y) - weld,
             std::max(ss[i].a.x, ss[i].b.x) + weld, std::max(ss[i].a.y, ss[i].b.y) + weld};

  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      if (bb[i][0] > bb[j][2] || bb[j][0] > bb[i][2] || bb[i][1] > bb[j][3] ||
          bb[j][1] > bb[i][3])
        continue;
      Point pts[2];
      int cnt = 0;
      if (detail::segment_intersections(ss[i].a, ss[i].b, ss[j].a, ss[j].b, weld,
                                        pts, cnt)) {
        for (int c = 0; c < cnt; ++c) {
          cuts[i].push_back(pts[c]);
          cuts[j].push_back(pts[c]);
        }
      }
    }
  }

  // Weld every cut point into the global vertex set.
  std::vector<std::vector<int>> ids(m);
  for (int i = 0; i < m; ++i) {
    ids[i].reserve(cuts[i].size());
    for (Point p : cuts[i]) ids[i].push_back(grid.insert(p, g.vertices, weld));
  }

  std::unordered_set<std::uint64_t> seen;
  for (int i = 0; i < m; ++i) {
    Point a = ss[i].a, d = ss[i].b - a;
    double len2 = dot(d, d);
    std::vector<std::pair<double, int>> order;
    order.reserve(ids[i].size());
    for (int id : ids[i]) order.push_back({dot(g.vertices[id] - a, d) / len2, id});
    std::sort(order.begin(), order.end());
    for (std::size_t k = 0; k + 1 < order.size(); ++k) {
      int u = order[k].second, v = order[k + 1].second;
      if (u == v) continue;
      int lo = std::min(u, v), hi = std::max(u, v);
      std::uint64_t key = (static_cast<std::uint64_t>(lo) << 32) | static_cast<std::uint32_t>(hi);
      if (seen.insert(key).second) g.edges.push_back({lo, hi});
    }
  }
  return g;
}

// Split candidate segments at mutual intersections, then keep exactly the
// pieces that separate differently-classified territory: each sub-edge is
// probed just off both sides of its midpoint. Box-rim pieces are dropped
// (the box boundary is re-added by Arrangement::build).
template <typename ClassifyFn>
std::vector<Segment> realized_boundary(const std::vector<Segment>& candidates,
                                       const Box& box, double weld,
                                       double probe_offset, ClassifyFn&& classify) {
  PlanarGraph g = split_segments(candidates, weld);
  std::vector<Segment> kept;
  for (auto [u, v] : g.edges) {
    Point a = g.vertices[u], b = g.vertices[v];
    Point d = b - a;
    double len = norm2(d);
    if (len <= 0) continue;
    Point n{-d.y / len, d.x / len};
    Point m = 0.5 * (a + b);
    if (classify(m + probe_offset * n) != classify(m - probe_offset * n))
      kept.push_back({a, b});
  }
  return kept;
}

// One-sided splitting: cut `targets` at every intersection with `cutters`
// (and nothing else), keeping pieces longer than the weld.
inline std::vector<Segment> split_against(const std::vector<Segment>& targets,
                                          const std::vector<Segment>& cutters,
                                          double weld) {
  std::vector<std::array<double, 4>> cbb(cutters.size());
  for (std::size_t c = 0; c < cutters.size(); ++c)
    cbb[c] = {std::min(cutters[c].a.x, cutters[c].b.x) - weld,
              std::min(cutters[c].a.y, cutters[c].b.y) - weld,
              std::max(cutters[c].a.x, cutters[c].b.x) + weld,
              std::max(cutters[c].a.y, cutters[c].b.y) + weld};
  std::vector<Segment> out;
  for (const Segment& t : targets) {
    Point d = t.b - t.a;
    double len2 = dot(d, d);
    if (len2 <= weld * weld) continue;
    std::vector<double> params{0.0, 1.0};
    double lo_x = std::min(t.a.x, t.b.x) - weld, hi_x = std::max(t.a.x, t.b.x) + weld;
    double lo_y = std::min(t.a.y, t.b.y) - weld, hi_y = std::max(t.a.y, t.b.y) + weld;
    for (std::size_t c = 0; c < cutters.size(); ++c) {
      if (cbb[c][0] > hi_x || lo_x > cbb[c][2] || cbb[c][1] > hi_y ||
          lo_y > cbb[c][3])
        continue;
      Point pts[2];
      int cnt = 0;
      if (detail::segment_intersections(t.a, t.b, cutters[c].a, cutters[c].b,
                                        weld, pts, cnt))
        for (int i = 0; i < cnt; ++i)
          params.push_back(std::clamp(dot(pts[i] - t.a, d) / len2, 0.0, 1.0));
    }
    std::sort(params.begin(), params.end());
    for (std::size_t i = 0; i + 1 < params.size(); ++i) {
      if ((params[i + 1] - params[i]) * std::sqrt(len2) <= weld) continue;
      out.push_back({t.at(params[i]), t.at(params[i + 1])});
    }
  }
  return out;
}

// Probe filter alone: keep sub-edges whose two sides classify differently.
template <typename ClassifyFn>
std::vector<Segment> filter_boundary(const std::vector<Segment>& pieces,
                                     double probe_offset, ClassifyFn&& classify) {
  std::vector<Segment> kept;
  for (const Segment& s : pieces) {
    Point d = s.b - s.a;
    double len = norm2(d);
    if (len <= 0) continue;
    Point n{-d.y / len, d.x / len};
    Point m = s.midpoint();
    if (classify(m + probe_offset * n) != classify(m - probe_offset * n))
      kept.push_back(s);
  }
  return kept;
}

class Arrangement {
 public:
  struct Face {
    std::vector<Point> outer;               // CCW
    std::vector<std::vector<Point>> holes;  // CW
    Point representative{};
    double area = 0;
  };

  // Input segments are clipped implicitly by including the box boundary
  // (callers pass segments already limited to the box).
  static Arrangement build(std::vector<Segment> segs, const Box& box, double weld) {
    for (const Segment& e : box.edges()) segs.push_back(e);
    Arrangement arr;
    arr.graph_ = split_segments(segs, weld);
    arr.prune_dangles();
    arr.extract_faces(weld);
    return arr;
  }

  const std::vector<Face>& faces() const { return faces_; }
  const PlanarGraph& graph() const { return graph_; }

  int vertex_count() const { return live_vertices_; }
  int edge_count() const { return static_cast<int>(graph_.edges.size()); }
  int face_count_with_outer() const { return static_cast<int>(faces_.size()) + 1; }

  int component_count() const {
    std::vector<int> parent(graph_.vertices.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::vector<char> used(graph_.vertices.size(), 0);
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (auto [u, v] : graph_.edges) {
      used[u] = used[v] = 1;
      int ru = find(u), rv = find(v);
      if (ru != rv) parent[ru] = rv;
    }
    std::unordered_set<int> roots;
    for (std::size_t i = 0; i < graph_.vertices.size(); ++i)
      if (used[i]) roots.insert(find(static_cast<int>(i)));
    return static_cast<int>(roots.size());
  }

  // Index of the first face whose closed region contains p; -1 if none.
  int locate(Point p, double eps) const {
    for (std::size_t f = 0; f < faces_.size(); ++f)
      if (face_contains(faces_[f], p, eps)) return static_cast<int>(f);
    return -1;
  }

  static bool face_contains(const Face& face, Point p, double eps) {
    if (!point_in_ring(face.outer, p, eps)) return false;
    for (const auto& hole : face.holes) {
      if (on_ring_boundary(hole, p, eps)) return true;
      if (point_in_ring(hole, p, 0.0)) return false;
    }
    return true;
  }

  static bool on_ring_boundary(const std::vector<Point>& ring, Point p, double eps) {
    for (std::size_t i = 0, n = ring.size(); i < n; ++i) {
      Point a = ring[i], b = ring[(i + 1) % n];
      Point ab = b - a;
      double len = norm2(ab);
      if (len <= 0) continue;
      double t = std::clamp(dot(p - a, ab) / (len * len), 0.0, 1.0);
      if (norm2(p - (a + t * ab)) <= eps) return true;
    }
    return false;
  }

 private:
  PlanarGraph graph_;
  std::vector<Face> faces_;
  int live_vertices_ = 0;

  void prune_dangles() {
    auto& edges = graph_.edges;
    std::vector<int> degree(graph_.vertices.size(), 0);
    std::vector<char> alive(edges.size(), 1);
    for (auto [u, v] : edges) {
      ++degree[u];
      ++degree[v];
    }
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t e = 0; e < edges.size(); ++e) {
        if (!alive[e]) continue;
        auto [u, v] = edges[e];
        if (degree[u] == 1 || degree[v] == 1) {
          alive[e] = 0;
          --degree[u];
          --degree[v];
          changed = true;
        }
      }
    }
    std::vector<std::pair<int, int>> kept;
    kept.reserve(edges.size());
    for (std::size_t e = 0; e < edges.size(); ++e)
      if (alive[e]) kept.push_back(edges[e]);
    edges = std::move(kept);
    live_vertices_ = 0;
    for (int d : degree)
      if (d > 0) ++live_vertices_;
  }

  void extract_faces(double weld) {
    const auto& V = graph_.vertices;
    const auto& E = graph_.edges;
    const int ne = static_cast<int>(E.size());
    if (ne == 0) return;

    // Half-edge h: 2e is u->v, 2e+1 is v->u.
    auto he_from = [&](int h) { return (h & 1) ? E[h >> 1].second : E[h >> 1].first; };
    auto he_to = [&](int h) { return (h & 1) ? E[h >> 1].first : E[h >> 1].second; };

    std::vector<std::vector<int>> out(V.size());
    for (int e = 0; e < ne; ++e) {
      out[E[e].first].push_back(2 * e);
      out[E[e].second].push_back(2 * e + 1);
    }
    std::vector<int> pos(2 * ne, -1);
    for (auto& lst : out) {
      if (lst.empty()) continue;
      int v = he_from(lst.front());
      std::sort(lst.begin(), lst.end(), [&](int h1, int h2) {
        Point d1 = V[he_to(h1)] - V[v];
        Point d2 = V[he_to(h2)] - V[v];
        double a1 = std::atan2(d1.y, d1.x), a2 = std::atan2(d2.y, d2.x);
        if (a1 != a2) return a1 < a2;
        return h1 < h2;
      });
      for (std::size_t k = 0; k < lst.size(); ++k) pos[lst[k]] = static_cast<int>(k);
    }

    // next(h): the half-edge after twin(h) in clockwise order around head(h).
    auto next_he = [&](int h) {
      int twin = h ^ 1;
      int v = he_from(twin);
      const auto& lst = out[v];
      int k = pos[twin];
      int deg = static_cast<int>(lst.size());
      return lst[(k - 1 + deg) % deg];
    };

    std::vector<int> cycle_of(2 * ne, -1);
    struct Cycle {
      std::vector<Point> ring;
      double area = 0;
      int leftmost = -1;  // vertex index of the leftmost-lowest ring vertex
    };
    std::vector<Cycle> cycles;
    for (int h0 = 0; h0 < 2 * ne; ++h0) {
      if (cycle_of[h0] != -1) continue;
      int cid = static_cast<int>(cycles.size());
      Cycle cyc;
      int h = h0;
      int guard = 0;
      do {
        cycle_of[h] = cid;
        int vfrom = he_from(h);
        cyc.ring.push_back(V[vfrom]);
        if (cyc.leftmost < 0 || V[vfrom] < V[cyc.leftmost]) cyc.leftmost = vfrom;
        h = next_he(h);
        if (++guard > 4 * ne + 8)
          throw std::runtime_error("arrangement: face walk did not close");
      } while (h != h0);
      cyc.area = ring_area(cyc.ring);
      cycles.push_back(std::move(cyc));
    }

    // Positive cycles are outer rings of bounded faces.
    std::vector<int> face_of_cycle(cycles.size(), -1);
    for (std::size_t c = 0; c < cycles.size(); ++c) {
      if (cycles[c].area > 0) {
        face_of_cycle[c] = static_cast<int>(faces_.size());
        Face f;
        f.outer = cycles[c].ring;
        faces_.push_back(std::move(f));
      }
    }

    // Assign every negative cycle to the smallest positive ring containing
    // its leftmost vertex; unmatched cycles border the unbounded face.
    for (std::size_t c = 0; c < cycles.size(); ++c) {
      if (cycles[c].area > 0) continue;
      Point probe = graph_.vertices[cycles[c].leftmost];
      int best = -1;
      double best_area = std::numeric_limits<double>::infinity();
      for (std::size_t d = 0; d < cycles.size(); ++d) {
        if (cycles[d].area <= 0) continue;
        if (cycles[d].leftmost == cycles[c].leftmost) continue;  // same boundary component
        if (cycles[d].area < best_area && point_in_ring(cycles[d].ring, probe, 0.0)) {
          // Skip rings sharing this component: the hole of a face never
          // touches the face's outer ring.
          bool shares = false;
          for (const Point& q : cycles[d].ring)
            if (norm2(q - probe) <= weld) { shares = true; break; }
          if (shares) continue;
          best = static_cast<int>(d);
          best_area = cycles[d].area;
        }
      }
      if (best >= 0) faces_[face_of_cycle[best]].holes.push_back(cycles[c].ring);
    }

    for (Face& f : faces_) {
      f.area = ring_area(f.outer);
      for (const auto& h : f.holes) f.area += ring_area(h);  // holes are CW
      f.representative = find_interior_point(f, weld);
    }
  }

  static Point find_interior_point(const Face& f, double weld) {
    double ymin = f.outer[0].y, ymax = f.outer[0].y;
    for (const Point& p : f.outer) {
      ymin = std::min(ymin, p.y);
      ymax = std::max(ymax, p.y);
    }
    std::vector<const std::vector<Point>*> rings{&f.outer};
    for (const auto& h : f.holes) rings.push_back(&h);

    Point best{};
    double best_width = -1;
    for (int attempt = 0; attempt < 24; ++attempt) {
      double frac = (attempt + 0.5) * 0.61803398875;
      frac -= std::floor(frac);
      double y = ymin + (ymax - ymin) * frac;
      std::vector<double> xs;
      for (const auto* ring : rings) {
        for (std::size_t i = 0, n = ring->size(); i < n; ++i) {
          Point a = (*ring)[i], b = (*ring)[(i + 1) % n];
          if ((a.y > y) == (b.y > y)) continue;
          xs.push_back(a.x + (y - a.y) / (b.y - a.y) * (b.x - a.x));
        }
      }
      if (xs.size() < 2) continue;
      std::sort(xs.begin(), xs.end());
      for (std::size_t i = 0; i + 1 < xs.size(); i += 2) {
        double w = xs[i + 1] - xs[i];
        if (w > best_width) {
          best_width = w;
          best = {(xs[i] + xs[i + 1]) / 2, y};
        }
      }
      if (best_width > 16 * weld && attempt >= 4) break;
    }
    if (best_width <= 0) return f.outer[0];  // degenerate sliver face
    return best;
  }
};

}  // namespace ksteiner
