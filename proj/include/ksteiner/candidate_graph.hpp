#pragma once

// Step 4a of the main algorithm: the candidate graph over one choice of k'
// region labels (steiner-steiner clique plus each steiner's candidate
// terminals), and the enumeration of its viable subforests. Every emitted
// topology uses all k' steiner nodes, attaches each terminal to at most one
// steiner, and keeps steiner degrees within [2, 6].

#include <algorithm>
#include <cstdint>
#include <vector>

#include "ksteiner/oodc.hpp"

namespace ksteiner {

struct CandidateGraph {
  std::vector<int> terminals;                        // global indices, sorted
  int steiner_count = 0;
  std::vector<std::vector<int>> steiner_candidates;  // local indices per steiner
};

inline CandidateGraph build_candidate_graph_from_sets(
    const std::vector<std::vector<int>>& sets) {
  CandidateGraph g;
  g.steiner_count = static_cast<int>(sets.size());
  for (const auto& s : sets)
    for (int t : s)
      if (t >= 0) g.terminals.push_back(t);
  std::sort(g.terminals.begin(), g.terminals.end());
  g.terminals.erase(std::unique(g.terminals.begin(), g.terminals.end()),
                    g.terminals.end());
  auto local = [&](int t) {
    return static_cast<int>(std::lower_bound(g.terminals.begin(), g.terminals.end(), t) -
                            g.terminals.begin());
  };
  g.steiner_candidates.resize(g.steiner_count);
  for (int s = 0; s < g.steiner_count; ++s) {
    std::vector<int>& cands = g.steiner_candidates[s];
    for (int t : sets[s])
      if (t >= 0) cands.push_back(local(t));
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
  }
  return g;
}

inline CandidateGraph build_candidate_graph(const std::vector<RegionLabel>& labels) {
  std::vector<std::vector<int>> sets;
  sets.reserve(labels.size());
  for (const RegionLabel& lbl : labels)
    sets.emplace_back(lbl.begin(), lbl.end());
  return build_candidate_graph_from_sets(sets);
}

// An uncoordinated topology: steiner-steiner edges plus per-steiner terminal
// attachments (global terminal indices).
struct ForestTopology {
  std::vector<std::pair<int, int>> ss_edges;
  std::vector<std::vector<int>> attachments;  // per steiner, sorted global ids
};

inline std::vector<ForestTopology> enumerate_viable_subforests(
    const CandidateGraph& g) {
  std::vector<ForestTopology> out;
  const int k = g.steiner_count;
  if (k == 0) return out;
  if (k > 7 || g.terminals.size() > 42)
    throw std::invalid_argument("enumerate_viable_subforests: k beyond desk-scale cap");

  std::vector<std::pair<int, int>> all_ss;
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b) all_ss.push_back({a, b});
  const int m = static_cast<int>(all_ss.size());

  std::vector<std::uint64_t> cand_masks_per_steiner(k, 0);
  for (int s = 0; s < k; ++s)
    for (int t : g.steiner_candidates[s]) cand_masks_per_steiner[s] |= 1ull << t;

  for (std::uint32_t ss = 0; ss < (1u << m); ++ss) {
    // Acyclicity of the chosen steiner-steiner edges.
    std::vector<int> parent(k);
    for (int i = 0; i < k; ++i) parent[i] = i;
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    std::vector<std::pair<int, int>> chosen;
    std::vector<int> deg(k, 0);
    bool ok = true;
    for (int e = 0; e < m && ok; ++e) {
      if (!(ss & (1u << e))) continue;
      auto [a, b] = all_ss[e];
      int ra = find(a), rb = find(b);
      if (ra == rb) ok = false;
      parent[ra] = rb;
      chosen.push_back(all_ss[e]);
      ++deg[a];
      ++deg[b];
    }
    if (!ok) continue;
    for (int s = 0; s < k && ok; ++s)
      if (deg[s] > 6) ok = false;
    if (!ok) continue;

    // Assign disjoint candidate-terminal subsets per steiner, keeping total
    // degrees in [2, 6].
    std::vector<std::uint64_t> picks(k, 0);
    auto emit = [&]() {
      ForestTopology ft;
      ft.ss_edges = chosen;
      ft.attachments.resize(k);
      for (int s = 0; s < k; ++s)
        for (int t = 0; t < static_cast<int>(g.terminals.size()); ++t)
          if (picks[s] & (1ull << t)) ft.attachments[s].push_back(g.terminals[t]);
      out.push_back(std::move(ft));
    };
    auto recurse = [&](auto&& self, int s, std::uint64_t used) -> void {
      if (s == k) {
        emit();
        return;
      }
      std::uint64_t avail = cand_masks_per_steiner[s] & ~used;
      int lo = std::max(0, 2 - deg[s]);
      int hi = 6 - deg[s];
      // Enumerate subsets of avail with popcount in [lo, hi].
      std::vector<int> bits;
      for (int t = 0; t < 64; ++t)
        if (avail & (1ull << t)) bits.push_back(t);
      int nb = static_cast<int>(bits.size());
      for (std::uint32_t sub = 0; sub < (1u << nb); ++sub) {
        int pc = __builtin_popcount(sub);
        if (pc < lo || pc > hi) continue;
        std::uint64_t mask = 0;
        for (int ib = 0; ib < nb; ++ib)
          if (sub & (1u << ib)) mask |= 1ull << bits[ib];
        picks[s] = mask;
        self(self, s + 1, used | mask);
      }
      picks[s] = 0;
    };
    recurse(recurse, 0, 0);
  }
  return out;
}

}  // namespace ksteiner
