#pragma once

// The F-MST update: attach a viable forest F to the terminal MST and delete
// the right tree edges, producing a minimum F-fixed spanning tree in time
// independent of the terminal count. Components are merged one at a time; for
// each attachment pair the auxiliary graph J (previous components as
// supernodes) yields, through the PP1/PP2 tables alone, the longest tree edge
// on the current connecting path.

#include <algorithm>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "ksteiner/mst.hpp"
#include "ksteiner/pp_tables.hpp"
#include "ksteiner/unit_ball.hpp"
#include "ksteiner/viable_forest.hpp"

namespace ksteiner {

struct FmstResult {
  SpanningTree tree;
  std::vector<int> deleted_edges;  // ids into the input tree's edge list
};

// Diagnostics for the J-uniqueness property tests.
struct FmstTrace {
  struct JSnapshot {
    int component = 0;
    std::pair<int, int> pair;                    // terminal indices x, y
    int node_count = 0;                          // 0={x}, 1={y}, 2.. previous A^j
    std::vector<std::pair<int, int>> j_edges;    // node index pairs
    std::vector<int> path_nodes;
  };
  std::vector<JSnapshot> snapshots;
};

// Deletion-set selection only; runs in time independent of the terminal
// count (tree assembly is the caller's O(n) concern). pp2 may be null when F
// is connected (single component): the membership predicate is only consulted
// once edges have been deleted by earlier components.
inline std::vector<int> fmst_plan(const SpanningTree& T, const PP1Table& pp1,
                                  const PP2Table* pp2, const ViableForest& F,
                                  FmstTrace* trace = nullptr) {
  auto comps = F.components();
  const int t_comps = static_cast<int>(comps.size());
  if (t_comps > 1 && !pp2)
    throw std::invalid_argument("fmst_update: PP2 required for a disconnected forest");

  std::vector<int> deleted;  // T edge ids, D^{i-1}
  auto is_deleted = [&](int e) {
    return std::find(deleted.begin(), deleted.end(), e) != deleted.end();
  };
  // A pure-T path between w and w' survives iff no deleted edge lies on it.
  auto path_clear = [&](int w, int wp) {
    for (int e : deleted)
      if (pp2->on_path(e, w, wp)) return false;
    return true;
  };

  for (int ci = 0; ci < t_comps; ++ci) {
    const auto& Ai = comps[ci].attachments;
    std::vector<int> new_deletions;
    for (std::size_t xi = 0; xi < Ai.size(); ++xi) {
      for (std::size_t yi = xi + 1; yi < Ai.size(); ++yi) {
        int x = Ai[xi], y = Ai[yi];
        // J nodes: 0={x}, 1={y}, 2+j = A^{j+1}'s attachment set (j < ci).
        int jn = 2 + ci;
        auto members = [&](int node) -> std::vector<int> {
          if (node == 0) return {x};
          if (node == 1) return {y};
          return comps[node - 2].attachments;
        };
        struct JEdge {
          int a, b;    // J node indices
          int w, wp;   // witness terminals, w in a's set, wp in b's set
        };
        std::vector<JEdge> jedges;
        for (int a = 0; a < jn; ++a) {
          for (int b = a + 1; b < jn; ++b) {
            std::optional<JEdge> found;
            for (int w : members(a)) {
              for (int wp : members(b)) {
                if (w == wp) continue;
                if (path_clear(w, wp)) {
                  found = JEdge{a, b, w, wp};
                  break;
                }
              }
              if (found) break;
            }
            if (found) jedges.push_back(*found);
          }
        }
        // BFS from {x} to {y}; the path is unique when it exists.
        std::vector<int> prev_edge(jn, -1), prev_node(jn, -1);
        std::vector<char> seen(jn, 0);
        std::vector<int> queue{0};
        seen[0] = 1;
        for (std::size_t qi = 0; qi < queue.size() && !seen[1]; ++qi) {
          int v = queue[qi];
          for (std::size_t je = 0; je < jedges.size(); ++je) {
            int other = -1;
            if (jedges[je].a == v) other = jedges[je].b;
            if (jedges[je].b == v) other = jedges[je].a;
            if (other < 0 || seen[other]) continue;
            seen[other] = 1;
            prev_edge[other] = static_cast<int>(je);
            prev_node[other] = v;
            queue.push_back(other);
          }
        }
        if (!seen[1])
          throw std::runtime_error("fmst_update: no connecting path in J");
        int best_edge = -1;
        std::vector<int> path_nodes{1};
        for (int v = 1; v != 0; v = prev_node[v]) {
          const JEdge& je = jedges[prev_edge[v]];
          path_nodes.push_back(prev_node[v]);
          int cand = pp1.longest_edge(je.w, je.wp);
          if (cand < 0)
            throw std::runtime_error("fmst_update: witness pair collapses");
          if (best_edge < 0 ||
              edge_max_preferred(T.edges[cand], T.edges[best_edge]))
            best_edge = cand;
        }
        new_deletions.push_back(best_edge);
        if (trace) {
          FmstTrace::JSnapshot snap;
          snap.component = ci;
          snap.pair = {x, y};
          snap.node_count = jn;
          for (const JEdge& je : jedges) snap.j_edges.push_back({je.a, je.b});
          std::reverse(path_nodes.begin(), path_nodes.end());
          snap.path_nodes = path_nodes;
          trace->snapshots.push_back(std::move(snap));
        }
      }
    }
    std::sort(new_deletions.begin(), new_deletions.end());
    new_deletions.erase(std::unique(new_deletions.begin(), new_deletions.end()),
                        new_deletions.end());
    for (int e : new_deletions)
      if (!is_deleted(e)) deleted.push_back(e);
  }
  std::sort(deleted.begin(), deleted.end());
  return deleted;
}

inline FmstResult fmst_update(const SpanningTree& T, const PP1Table& pp1,
                              const PP2Table* pp2, const ViableForest& F,
                              const UnitBall& ball, FmstTrace* trace = nullptr) {
  const int n = static_cast<int>(T.nodes.size());
  if (pp1.size() != n || (pp2 && pp2->size() != n))
    throw std::invalid_argument("fmst_update: preprocessing tables do not match the tree");
  for (NodeRole r : T.roles)
    if (r != NodeRole::terminal)
      throw std::invalid_argument("fmst_update: base tree must span terminals only");
  if (!is_viable(F, n))
    throw std::invalid_argument("fmst_update: forest is not viable");

  // Assemble T_F = (T \ D) + F.
  FmstResult res;
  res.deleted_edges = fmst_plan(T, pp1, pp2, F, trace);
  const std::vector<int>& deleted = res.deleted_edges;
  auto is_deleted = [&](int e) {
    return std::binary_search(deleted.begin(), deleted.end(), e);
  };
  SpanningTree& out = res.tree;
  out.nodes = T.nodes;
  out.roles = T.roles;
  const int ns = static_cast<int>(F.steiner.size());
  for (int s = 0; s < ns; ++s) {
    out.nodes.push_back(F.steiner[s]);
    out.roles.push_back(NodeRole::steiner);
  }
  for (std::size_t e = 0; e < T.edges.size(); ++e)
    if (!is_deleted(static_cast<int>(e))) out.edges.push_back(T.edges[e]);
  auto global = [&](NodeRef r) { return r.steiner ? n + r.index : r.index; };
  for (const auto& fe : F.edges) {
    int u = global(fe.u), v = global(fe.v);
    if (u > v) std::swap(u, v);
    out.edges.push_back({u, v, ball.distance(out.nodes[u], out.nodes[v])});
  }
  if (!out.is_connected_tree())
    throw std::runtime_error("fmst_update: result is not a spanning tree");
  std::sort(out.edges.begin(), out.edges.end(), edge_less);
  return res;
}

}  // namespace ksteiner
