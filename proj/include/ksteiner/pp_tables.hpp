#pragma once

// Preprocessing tables over the terminal MST. PP1 stores the longest edge on
// the tree path between every node pair (ties resolved to the canonically
// earlier edge). PP2 stores, for every pair, the set of tree edges on their
// path, queried as the membership predicate H(e, y, z).

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "ksteiner/mst.hpp"

namespace ksteiner {

class PP1Table {
 public:
  explicit PP1Table(const SpanningTree& t) : n_(static_cast<int>(t.nodes.size())) {
    table_.assign(static_cast<std::size_t>(n_) * n_, -1);
    auto adj = t.adjacency();
    std::vector<int> stack_node, stack_max;
    for (int root = 0; root < n_; ++root) {
      stack_node.assign(1, root);
      stack_max.assign(1, -1);
      std::vector<char> seen(n_, 0);
      seen[root] = 1;
      while (!stack_node.empty()) {
        int v = stack_node.back();
        int m = stack_max.back();
        stack_node.pop_back();
        stack_max.pop_back();
        if (m >= 0) table_[static_cast<std::size_t>(root) * n_ + v] = m;
        for (int e : adj[v]) {
          const TreeEdge& te = t.edges[e];
          int w = te.u == v ? te.v : te.u;
          if (seen[w]) continue;
          seen[w] = 1;
          int nm = (m < 0 || edge_max_preferred(te, t.edges[m])) ? e : m;
          stack_node.push_back(w);
          stack_max.push_back(nm);
        }
      }
    }
  }

  int size() const { return n_; }

  // Edge id of l_T(u,v); -1 when u == v.
  int longest_edge(int u, int v) const {
    return table_[static_cast<std::size_t>(u) * n_ + v];
  }

 private:
  int n_;
  std::vector<int> table_;
};

class PP2Table {
 public:
  explicit PP2Table(const SpanningTree& t) : n_(static_cast<int>(t.nodes.size())) {
    paths_.assign(static_cast<std::size_t>(n_) * n_, std::vector<int>{});
    auto adj = t.adjacency();
    std::vector<int> stack_node;
    std::vector<std::vector<int>> stack_path;
    for (int root = 0; root < n_; ++root) {
      stack_node.assign(1, root);
      stack_path.assign(1, {});
      std::vector<char> seen(n_, 0);
      seen[root] = 1;
      while (!stack_node.empty()) {
        int v = stack_node.back();
        std::vector<int> path = std::move(stack_path.back());
        stack_node.pop_back();
        stack_path.pop_back();
        if (v != root && root < v) {
          std::vector<int> sorted = path;
          std::sort(sorted.begin(), sorted.end());
          paths_[static_cast<std::size_t>(root) * n_ + v] = std::move(sorted);
        }
        for (int e : adj[v]) {
          const TreeEdge& te = t.edges[e];
          int w = te.u == v ? te.v : te.u;
          if (seen[w]) continue;
          seen[w] = 1;
          std::vector<int> np = path;
          np.push_back(e);
          stack_node.push_back(w);
          stack_path.push_back(std::move(np));
        }
      }
    }
  }

  int size() const { return n_; }

  // H(e, y, z): is edge e on the tree path between y and z?
  bool on_path(int edge_id, int y, int z) const {
    if (y == z) return false;
    const std::vector<int>& p = path(y, z);
    return std::binary_search(p.begin(), p.end(), edge_id);
  }

  const std::vector<int>& path(int y, int z) const {
    if (y > z) std::swap(y, z);
    return paths_[static_cast<std::size_t>(y) * n_ + z];
  }

 private:
  int n_;
  std::vector<std::vector<int>> paths_;
};

inline PP1Table preprocess_pp1(const SpanningTree& t) { return PP1Table(t); }
inline PP2Table preprocess_pp2(const SpanningTree& t) { return PP2Table(t); }

}  // namespace ksteiner
