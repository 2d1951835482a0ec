#pragma once

// Minimum spanning trees under the ball norm. All tie-breaking goes through
// one canonical total order on edges, (length, min endpoint, max endpoint),
// which makes the minimum spanning tree unique and every run reproducible.
// Tree totals are sums of the edge lengths in ascending order so that two
// trees with equal length multisets produce bit-identical totals.

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "ksteiner/geometry.hpp"
#include "ksteiner/unit_ball.hpp"

namespace ksteiner {

enum class NodeRole { terminal, steiner };

struct TreeEdge {
  int u = 0, v = 0;   // node indices, u < v
  double length = 0;
};

// Canonical order: by length, then by endpoint indices.
inline bool edge_less(const TreeEdge& a, const TreeEdge& b) {
  if (a.length != b.length) return a.length < b.length;
  if (a.u != b.u) return a.u < b.u;
  return a.v < b.v;
}

// "Longest edge" rule used by the preprocessing tables: longer wins; among
// equal lengths the canonically earlier edge is chosen.
inline bool edge_max_preferred(const TreeEdge& a, const TreeEdge& b) {
  if (a.length != b.length) return a.length > b.length;
  if (a.u != b.u) return a.u < b.u;
  return a.v < b.v;
}

struct SpanningTree {
  std::vector<Point> nodes;
  std::vector<NodeRole> roles;
  std::vector<TreeEdge> edges;

  std::vector<std::vector<int>> adjacency() const {
    std::vector<std::vector<int>> adj(nodes.size());
    for (std::size_t e = 0; e < edges.size(); ++e) {
      adj[edges[e].u].push_back(static_cast<int>(e));
      adj[edges[e].v].push_back(static_cast<int>(e));
    }
    return adj;
  }

  // Sorted-ascending sum; invariant under which optimal tree was found.
  double total_length() const {
    std::vector<double> ls;
    ls.reserve(edges.size());
    for (const TreeEdge& e : edges) ls.push_back(e.length);
    std::sort(ls.begin(), ls.end());
    double s = 0;
    for (double l : ls) s += l;
    return s;
  }

  std::vector<double> lengths() const {
    std::vector<double> ls;
    ls.reserve(edges.size());
    for (const TreeEdge& e : edges) ls.push_back(e.length);
    return ls;
  }

  bool is_connected_tree() const {
    if (nodes.empty()) return false;
    if (edges.size() + 1 != nodes.size()) return false;
    std::vector<int> parent(nodes.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (const TreeEdge& e : edges) {
      int ru = find(e.u), rv = find(e.v);
      if (ru == rv) return false;
      parent[ru] = rv;
    }
    return true;
  }
};

// Prim's construction under the canonical order, O(n^2).
inline SpanningTree build_mst(const UnitBall& ball,
                              const std::vector<Point>& points) {
  if (points.empty()) throw std::invalid_argument("build_mst: empty input");
  const int n = static_cast<int>(points.size());
  SpanningTree t;
  t.nodes = points;
  t.roles.assign(n, NodeRole::terminal);
  if (n == 1) return t;

  auto edge_between = [&](int a, int b) {
    int u = std::min(a, b), v = std::max(a, b);
    return TreeEdge{u, v, ball.distance(points[u], points[v])};
  };

  std::vector<char> in_tree(n, 0);
  std::vector<TreeEdge> best(n);
  in_tree[0] = 1;
  for (int v = 1; v < n; ++v) best[v] = edge_between(0, v);
  for (int step = 1; step < n; ++step) {
    int pick = -1;
    for (int v = 0; v < n; ++v) {
      if (in_tree[v]) continue;
      if (pick < 0 || edge_less(best[v], best[pick])) pick = v;
    }
    t.edges.push_back(best[pick]);
    in_tree[pick] = 1;
    for (int v = 0; v < n; ++v) {
      if (in_tree[v]) continue;
      TreeEdge cand = edge_between(pick, v);
      if (edge_less(cand, best[v])) best[v] = cand;
    }
  }
  std::sort(t.edges.begin(), t.edges.end(), edge_less);
  return t;
}

}  // namespace ksteiner
