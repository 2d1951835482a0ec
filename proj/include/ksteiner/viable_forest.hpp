#pragma once

// Viable forests: the internal topologies attached to the terminal MST.
// A forest over terminal indices and embedded Steiner points is viable when
// its leaves are exactly its terminals, every Steiner node has degree 2..6,
// it is acyclic, and it uses at most k Steiner points.

#include <algorithm>
#include <numeric>
#include <vector>

#include "ksteiner/geometry.hpp"

namespace ksteiner {

struct NodeRef {
  bool steiner = false;
  int index = 0;  // terminal index into X, or steiner index into F.steiner

  friend bool operator==(NodeRef a, NodeRef b) {
    return a.steiner == b.steiner && a.index == b.index;
  }
  friend bool operator<(NodeRef a, NodeRef b) {
    if (a.steiner != b.steiner) return !a.steiner;  // terminals order first
    return a.index < b.index;
  }
};

inline NodeRef terminal_ref(int i) { return {false, i}; }
inline NodeRef steiner_ref(int i) { return {true, i}; }

struct ViableForest {
  std::vector<Point> steiner;  // embedded Steiner points
  struct Edge {
    NodeRef u, v;
  };
  std::vector<Edge> edges;

  // Attachment set A: terminal indices appearing in the forest, sorted.
  std::vector<int> attachments() const {
    std::vector<int> a;
    for (const Edge& e : edges) {
      if (!e.u.steiner) a.push_back(e.u.index);
      if (!e.v.steiner) a.push_back(e.v.index);
    }
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    return a;
  }

  struct Component {
    std::vector<int> attachments;     // A^i, sorted terminal indices
    std::vector<int> steiner_nodes;   // steiner indices in this component
    std::vector<int> edge_ids;
  };

  // Components ordered by smallest attached terminal.
  std::vector<Component> components() const {
    int ns = static_cast<int>(steiner.size());
    std::vector<int> term_ids;
    for (const Edge& e : edges) {
      if (!e.u.steiner) term_ids.push_back(e.u.index);
      if (!e.v.steiner) term_ids.push_back(e.v.index);
    }
    std::sort(term_ids.begin(), term_ids.end());
    term_ids.erase(std::unique(term_ids.begin(), term_ids.end()), term_ids.end());
    auto local_term = [&](int t) {
      return static_cast<int>(std::lower_bound(term_ids.begin(), term_ids.end(), t) -
                              term_ids.begin());
    };
    int total = ns + static_cast<int>(term_ids.size());
    std::vector<int> parent(total);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    auto id_of = [&](NodeRef r) {
      return r.steiner ? r.index : ns + local_term(r.index);
    };
    for (const Edge& e : edges) {
      int a = find(id_of(e.u)), b = find(id_of(e.v));
      if (a != b) parent[a] = b;
    }
    std::vector<Component> comps;
    std::vector<int> comp_of(total, -1);
    for (std::size_t eid = 0; eid < edges.size(); ++eid) {
      int root = find(id_of(edges[eid].u));
      if (comp_of[root] < 0) {
        comp_of[root] = static_cast<int>(comps.size());
        comps.emplace_back();
      }
      comps[comp_of[root]].edge_ids.push_back(static_cast<int>(eid));
    }
    for (Component& c : comps) {
      for (int eid : c.edge_ids) {
        for (NodeRef r : {edges[eid].u, edges[eid].v}) {
          if (r.steiner)
            c.steiner_nodes.push_back(r.index);
          else
            c.attachments.push_back(r.index);
        }
      }
      auto uniq = [](std::vector<int>& v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
      };
      uniq(c.steiner_nodes);
      uniq(c.attachments);
    }
    std::sort(comps.begin(), comps.end(), [](const Component& a, const Component& b) {
      return a.attachments.front() < b.attachments.front();
    });
    return comps;
  }
};

// Full viability check; terminal_count guards attachment indices, k the
// Steiner budget (k < 0 skips the budget check).
inline bool is_viable(const ViableForest& f, int terminal_count = -1, int k = -1) {
  int ns = static_cast<int>(f.steiner.size());
  if (k >= 0 && ns > k) return false;

  std::vector<int> sdeg(ns, 0);
  std::vector<std::pair<int, int>> tdeg;  // terminal index -> degree
  auto bump_term = [&](int t) {
    for (auto& [idx, d] : tdeg)
      if (idx == t) { ++d; return; }
    tdeg.push_back({t, 1});
  };
  for (const auto& e : f.edges) {
    if (e.u == e.v) return false;
    for (NodeRef r : {e.u, e.v}) {
      if (r.steiner) {
        if (r.index < 0 || r.index >= ns) return false;
        ++sdeg[r.index];
      } else {
        if (r.index < 0 || (terminal_count >= 0 && r.index >= terminal_count))
          return false;
        bump_term(r.index);
      }
    }
  }
  // Parallel edges would defeat the acyclicity union-find below only if the
  // same pair appears twice; reject explicitly.
  for (std::size_t i = 0; i < f.edges.size(); ++i)
    for (std::size_t j = i + 1; j < f.edges.size(); ++j) {
      auto [a1, b1] = std::minmax(f.edges[i].u, f.edges[i].v);
      auto [a2, b2] = std::minmax(f.edges[j].u, f.edges[j].v);
      if (a1 == a2 && b1 == b2) return false;
    }

  for (int s = 0; s < ns; ++s)
    if (sdeg[s] < 2 || sdeg[s] > 6) return false;  // steiner nodes are internal
  for (auto [t, d] : tdeg)
    if (d != 1) return false;  // leaves of F are exactly the attachments

  // Acyclicity.
  std::vector<int> term_ids;
  for (auto [t, d] : tdeg) term_ids.push_back(t);
  std::sort(term_ids.begin(), term_ids.end());
  int total = ns + static_cast<int>(term_ids.size());
  std::vector<int> parent(total);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto id_of = [&](NodeRef r) {
    if (r.steiner) return r.index;
    int pos = static_cast<int>(std::lower_bound(term_ids.begin(), term_ids.end(),
                                                r.index) - term_ids.begin());
    return ns + pos;
  };
  for (const auto& e : f.edges) {
    int a = find(id_of(e.u)), b = find(id_of(e.v));
    if (a == b) return false;
    parent[a] = b;
  }
  return true;
}

}  // namespace ksteiner
