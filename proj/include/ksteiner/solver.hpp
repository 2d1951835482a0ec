#pragma once

// Algorithm k-GSMT: build the OODC partition, the terminal MST and its
// preprocessing tables, then for every choice (with repetition) of k' region
// labels enumerate the viable internal topologies, solve each fixed-topology
// subproblem, attach the resulting forest through the F-MST update, and keep
// the cheapest candidate. The plain MST is always a candidate (k' = 0).

#include <atomic>
#include <chrono>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "ksteiner/candidate_graph.hpp"
#include "ksteiner/cost.hpp"
#include "ksteiner/fixed_topology.hpp"
#include "ksteiner/fmst.hpp"
#include "ksteiner/hex_frame.hpp"
#include "ksteiner/mst.hpp"
#include "ksteiner/odc.hpp"
#include "ksteiner/oodc.hpp"
#include "ksteiner/pp_tables.hpp"
#include "ksteiner/unit_ball.hpp"
#include "ksteiner/viable_forest.hpp"

namespace ksteiner {

struct ProblemSpec {
  std::vector<Point> terminals;
  UnitBall ball = UnitBall::euclidean();
  int k = 1;
  CostFunction cost = CostFunction::sum();
  double tol = 1e-9;
  int threads = 1;
  double box_inflation = 3.0;
  std::optional<Point> seed_direction;
  std::function<void(int, int)> progress;  // (items done, items total)
};

struct SolveStats {
  int regions = 0;
  int distinct_labels = 0;
  long topologies_evaluated = 0;
  int warnings = 0;  // fixed-topology tolerance failures, skipped candidates
  double wall_ms = 0;
};

struct Solution {
  std::vector<Point> steiner;
  struct Edge {
    NodeRef u, v;
  };
  std::vector<Edge> edges;
  double cost = 0;
  std::vector<double> lengths;
  SolveStats stats;
  std::vector<std::vector<int>> provenance_labels;  // chosen label sets
};

namespace detail {

// Candidate held during the search, with a canonical total order so the
// parallel reduction is schedule-independent.
struct Candidate {
  double cost = 0;
  std::vector<Point> steiner;                        // sorted by (x,y)
  std::vector<std::pair<long, long>> edge_keys;      // canonical edge list
  SpanningTree tree;
  std::vector<std::vector<int>> labels;

  static long ref_key(int node, int n_terminals, const std::vector<int>& perm) {
    if (node < n_terminals) return node;
    return 1000000000L + perm[node - n_terminals];
  }

  static Candidate from_tree(const SpanningTree& t, double cost,
                             std::vector<std::vector<int>> labels) {
    Candidate c;
    c.cost = cost;
    c.tree = t;
    c.labels = std::move(labels);
    int n_term = 0;
    std::vector<Point> st;
    for (std::size_t i = 0; i < t.nodes.size(); ++i) {
      if (t.roles[i] == NodeRole::terminal)
        ++n_term;
      else
        st.push_back(t.nodes[i]);
    }
    std::vector<int> order(st.size());
    for (std::size_t i = 0; i < st.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return st[a] < st[b]; });
    std::vector<int> perm(st.size());
    for (std::size_t r = 0; r < order.size(); ++r) perm[order[r]] = static_cast<int>(r);
    c.steiner.resize(st.size());
    for (std::size_t i = 0; i < st.size(); ++i) c.steiner[perm[i]] = st[i];
    for (const TreeEdge& e : t.edges) {
      long ku = ref_key(e.u, n_term, perm), kv = ref_key(e.v, n_term, perm);
      c.edge_keys.push_back({std::min(ku, kv), std::max(ku, kv)});
    }
    std::sort(c.edge_keys.begin(), c.edge_keys.end());
    return c;
  }

  // cost, then fewer steiner points, then lexicographic edge list.
  bool better_than(const Candidate& o) const {
    if (cost != o.cost) return cost < o.cost;
    if (steiner.size() != o.steiner.size()) return steiner.size() < o.steiner.size();
    if (edge_keys != o.edge_keys) return edge_keys < o.edge_keys;
    for (std::size_t i = 0; i < steiner.size(); ++i)
      if (steiner[i] != o.steiner[i]) return steiner[i] < o.steiner[i];
    return false;
  }
};

struct ComponentKey {
  int steiner_count;
  std::vector<std::pair<int, int>> ss_edges;
  std::vector<std::vector<int>> attachments;
  friend bool operator<(const ComponentKey& a, const ComponentKey& b) {
    if (a.steiner_count != b.steiner_count) return a.steiner_count < b.steiner_count;
    if (a.ss_edges != b.ss_edges) return a.ss_edges < b.ss_edges;
    return a.attachments < b.attachments;
  }
};

}  // namespace detail

inline Box working_box(const std::vector<Point>& pts, double inflation) {
  Box b = Box::bounding(pts);
  return b.inflated(inflation * b.diagonal() + 1.0);
}

inline Solution solve(const ProblemSpec& spec) {
  auto t_start = std::chrono::steady_clock::now();
  if (spec.terminals.empty()) throw std::invalid_argument("solve: no terminals");
  if (spec.k < 1) throw std::invalid_argument("solve: k must be >= 1");
  for (Point p : spec.terminals)
    if (!finite(p)) throw std::invalid_argument("solve: non-finite terminal");

  // Coincident terminals are deduplicated; they rejoin as zero-length edges.
  std::vector<Point> X;
  std::vector<int> rep_of;  // original -> unique index
  for (const Point& p : spec.terminals) {
    int found = -1;
    for (std::size_t j = 0; j < X.size(); ++j)
      if (X[j] == p) { found = static_cast<int>(j); break; }
    if (found < 0) {
      found = static_cast<int>(X.size());
      X.push_back(p);
    }
    rep_of.push_back(found);
  }
  std::vector<int> first_original(X.size(), -1);
  for (std::size_t i = 0; i < rep_of.size(); ++i)
    if (first_original[rep_of[i]] < 0) first_original[rep_of[i]] = static_cast<int>(i);

  const int n = static_cast<int>(X.size());
  const CostFunction& cf = spec.cost;

  auto finish = [&](detail::Candidate best) {
    Solution sol;
    sol.steiner = best.steiner;
    sol.provenance_labels = best.labels;
    // Map unique terminal indices back to the original list and re-attach
    // duplicates with zero-length edges.
    const SpanningTree& t = best.tree;
    std::vector<int> steiner_perm;  // tree steiner index -> sorted index
    {
      std::vector<Point> st;
      for (std::size_t i = 0; i < t.nodes.size(); ++i)
        if (t.roles[i] == NodeRole::steiner) st.push_back(t.nodes[i]);
      std::vector<int> order(st.size());
      for (std::size_t i = 0; i < st.size(); ++i) order[i] = static_cast<int>(i);
      std::sort(order.begin(), order.end(),
                [&](int a, int b) { return st[a] < st[b]; });
      steiner_perm.assign(st.size(), 0);
      for (std::size_t r = 0; r < order.size(); ++r)
        steiner_perm[order[r]] = static_cast<int>(r);
    }
    auto to_ref = [&](int node) {
      if (node < n) return terminal_ref(first_original[node]);
      return steiner_ref(steiner_perm[node - n]);
    };
    for (const TreeEdge& e : t.edges) {
      NodeRef u = to_ref(e.u), v = to_ref(e.v);
      if (v < u) std::swap(u, v);
      sol.edges.push_back({u, v});
      sol.lengths.push_back(e.length);
    }
    for (std::size_t i = 0; i < rep_of.size(); ++i) {
      int fo = first_original[rep_of[i]];
      if (static_cast<int>(i) != fo) {
        sol.edges.push_back({terminal_ref(fo), terminal_ref(static_cast<int>(i))});
        sol.lengths.push_back(0.0);
      }
    }
    sol.cost = evaluate_cost(cf, sol.lengths);
    sol.stats.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                  t_start)
            .count();
    return sol;
  };

  if (n == 1) {
    SpanningTree t;
    t.nodes = X;
    t.roles = {NodeRole::terminal};
    Solution sol = finish(detail::Candidate::from_tree(t, 0.0, {}));
    return sol;
  }

  const Box box = working_box(X, spec.box_inflation);
  Point seed_dir = spec.seed_direction.value_or(Point{1, 0});
  HexFrame frame = construct_hex_frame(spec.ball, spec.ball.boundary_point(seed_dir));

  // Six ODC partitions; independent, so they may run concurrently.
  std::array<ODCPartition, 6> parts;
  {
    int nthreads = std::max(1, std::min(spec.threads, 6));
    if (nthreads == 1) {
      for (int i = 0; i < 6; ++i)
        parts[i] = build_odc_partition(spec.ball, frame, X, i, box, spec.tol);
    } else {
      std::vector<std::thread> pool;
      std::atomic<int> next{0};
      for (int t = 0; t < nthreads; ++t)
        pool.emplace_back([&] {
          int i;
          while ((i = next.fetch_add(1)) < 6)
            parts[i] = build_odc_partition(spec.ball, frame, X, i, box, spec.tol);
        });
      for (auto& th : pool) th.join();
    }
  }

  OODCOverlay overlay =
      overlay_partitions(spec.ball, frame, X, parts, box, spec.tol);
  auto labels = candidate_region_labels(overlay);

  SolveStats stats;
  stats.regions = static_cast<int>(overlay.regions.size());
  stats.distinct_labels = static_cast<int>(labels.size());

  // Distinct terminal sets drive the iteration: identical sets build
  // identical candidate graphs.
  std::vector<std::vector<int>> label_sets;
  for (const auto& [lbl, rep] : labels) {
    std::vector<int> s;
    for (int t : lbl)
      if (t >= 0) s.push_back(t);
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    if (s.empty()) continue;
    if (std::find(label_sets.begin(), label_sets.end(), s) == label_sets.end())
      label_sets.push_back(s);
  }

  SpanningTree T = build_mst(spec.ball, X);
  PP1Table pp1(T);
  std::optional<PP2Table> pp2;
  if (spec.k >= 2) pp2.emplace(T);

  // Work items: every multiset of k' label sets, k' = 1..k.
  std::vector<std::vector<int>> items;  // indices into label_sets
  {
    std::vector<int> cur;
    auto rec = [&](auto&& self, int kprime, int start) -> void {
      if (static_cast<int>(cur.size()) == kprime) {
        items.push_back(cur);
        return;
      }
      for (int i = start; i < static_cast<int>(label_sets.size()); ++i) {
        cur.push_back(i);
        self(self, kprime, i);
        cur.pop_back();
      }
    };
    for (int kprime = 1; kprime <= spec.k; ++kprime) rec(rec, kprime, 0);
  }

  detail::Candidate base = detail::Candidate::from_tree(
      T, evaluate_cost(cf, T.lengths()), {});

  std::atomic<long> done{0};
  std::mutex progress_mu;
  auto report = [&](long d) {
    if (!spec.progress) return;
    std::lock_guard<std::mutex> lk(progress_mu);
    spec.progress(static_cast<int>(d), static_cast<int>(items.size()));
  };

  auto run_range = [&](int tid, int nthreads, detail::Candidate& local_best,
                       long& topo_count, int& warn_count) {
    std::map<detail::ComponentKey, Placement> memo;
    for (std::size_t it = tid; it < items.size(); it += nthreads) {
      const std::vector<int>& item = items[it];
      std::vector<std::vector<int>> sets;
      for (int li : item) sets.push_back(label_sets[li]);
      CandidateGraph g = build_candidate_graph_from_sets(sets);
      auto topologies = enumerate_viable_subforests(g);
      for (const ForestTopology& ft : topologies) {
        ++topo_count;
        const int kprime = g.steiner_count;
        // Components over the steiner nodes.
        std::vector<int> comp(kprime);
        for (int s = 0; s < kprime; ++s) comp[s] = s;
        auto find = [&](int x) {
          while (comp[x] != x) x = comp[x] = comp[comp[x]];
          return x;
        };
        for (auto [a, b] : ft.ss_edges) {
          int ra = find(a), rb = find(b);
          if (ra != rb) comp[ra] = rb;
        }
        std::map<int, std::vector<int>> by_comp;
        for (int s = 0; s < kprime; ++s) by_comp[find(s)].push_back(s);

        ViableForest F;
        F.steiner.assign(kprime, Point{});
        bool failed = false;
        for (auto& [root, snodes] : by_comp) {
          // Local instance: terminals are the union of attachments.
          detail::ComponentKey key;
          key.steiner_count = static_cast<int>(snodes.size());
          std::vector<int> local_of(kprime, -1);
          for (std::size_t i = 0; i < snodes.size(); ++i)
            local_of[snodes[i]] = static_cast<int>(i);
          for (auto [a, b] : ft.ss_edges)
            if (local_of[a] >= 0 && local_of[b] >= 0) {
              int la = local_of[a], lb = local_of[b];
              key.ss_edges.push_back({std::min(la, lb), std::max(la, lb)});
            }
          std::sort(key.ss_edges.begin(), key.ss_edges.end());
          for (int s : snodes) key.attachments.push_back(ft.attachments[s]);

          auto mit = memo.find(key);
          if (mit == memo.end()) {
            std::vector<Point> terms;
            std::vector<std::pair<int, int>> edges;
            int c = 0;
            for (int s : snodes) c += static_cast<int>(ft.attachments[s].size());
            terms.reserve(c);
            int offset = 0;
            for (std::size_t i = 0; i < snodes.size(); ++i) {
              for (int t : ft.attachments[snodes[i]]) {
                terms.push_back(X[t]);
                edges.push_back({offset, c + static_cast<int>(i)});
                ++offset;
              }
            }
            for (auto [la, lb] : key.ss_edges) edges.push_back({c + la, c + lb});
            TopologyInstance inst{terms, static_cast<int>(snodes.size()), edges,
                                  &spec.ball};
            try {
              Placement pl = solve_fixed_topology(inst, cf, spec.tol);
              mit = memo.emplace(key, std::move(pl)).first;
            } catch (const ToleranceNotReached&) {
              ++warn_count;
              failed = true;
              break;
            }
          }
          for (std::size_t i = 0; i < snodes.size(); ++i)
            F.steiner[snodes[i]] = mit->second.steiner[i];
        }
        if (failed) continue;
        for (auto [a, b] : ft.ss_edges) F.edges.push_back({steiner_ref(a), steiner_ref(b)});
        for (int s = 0; s < kprime; ++s)
          for (int t : ft.attachments[s])
            F.edges.push_back({terminal_ref(t), steiner_ref(s)});

        FmstResult fr = fmst_update(T, pp1, pp2 ? &*pp2 : nullptr, F, spec.ball);
        double cost = evaluate_cost(cf, fr.tree.lengths());
        if (cost > local_best.cost) continue;
        detail::Candidate cand = detail::Candidate::from_tree(fr.tree, cost, sets);
        if (cand.better_than(local_best)) local_best = std::move(cand);
      }
      report(done.fetch_add(1) + 1);
    }
  };

  int nthreads = std::max(1, spec.threads);
  detail::Candidate best = base;
  long total_topologies = 0;
  int total_warnings = 0;
  if (nthreads == 1 || items.size() <= 1) {
    run_range(0, 1, best, total_topologies, total_warnings);
  } else {
    std::vector<detail::Candidate> bests(nthreads, base);
    std::vector<long> counts(nthreads, 0);
    std::vector<int> warns(nthreads, 0);
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t)
      pool.emplace_back([&, t] { run_range(t, nthreads, bests[t], counts[t], warns[t]); });
    for (auto& th : pool) th.join();
    for (int t = 0; t < nthreads; ++t) {
      total_topologies += counts[t];
      total_warnings += warns[t];
      if (bests[t].better_than(best)) best = bests[t];
    }
  }

  stats.topologies_evaluated = total_topologies;
  stats.warnings = total_warnings;

  Solution sol = finish(best);
  sol.stats.regions = stats.regions;
  sol.stats.distinct_labels = stats.distinct_labels;
  sol.stats.topologies_evaluated = stats.topologies_evaluated;
  sol.stats.warnings = stats.warnings;
  return sol;
}

}  // namespace ksteiner
