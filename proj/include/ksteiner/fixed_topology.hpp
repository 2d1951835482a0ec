#pragma once

// The fixed topology generalised Steiner problem: terminals pinned, Steiner
// coordinates free, tree shape given; minimise the cost of the edge-length
// vector. Power-2 under ellipse norms reduces to one positive-definite linear
// solve (each Steiner point the average of its neighbours). Every other
// (cost, norm) combination runs convex numerical descent: multi-start
// subgradient steps with diminishing step sizes, a log-sum-exp smoothing
// ladder for the bottleneck max, and an eight-direction pattern-search polish.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "ksteiner/cost.hpp"
#include "ksteiner/geometry.hpp"
#include "ksteiner/linprog.hpp"
#include "ksteiner/unit_ball.hpp"

namespace ksteiner {

struct TopologyInstance {
  std::vector<Point> terminals;            // embedded set A
  int steiner_count = 0;
  std::vector<std::pair<int, int>> edges;  // 0..|A|-1 terminals, then steiner
  const UnitBall* ball = nullptr;

  int node_count() const { return static_cast<int>(terminals.size()) + steiner_count; }

  void validate() const {
    int c = static_cast<int>(terminals.size());
    int total = node_count();
    if (!ball) throw std::invalid_argument("topology: missing ball");
    if (steiner_count < 1) throw std::invalid_argument("topology: no steiner nodes");
    if (static_cast<int>(edges.size()) != total - 1)
      throw std::invalid_argument("topology: edge count must be nodes-1");
    if (c > 6 * steiner_count)
      throw std::invalid_argument("topology: more than 6k' terminals");
    std::vector<int> deg(total, 0), parent(total);
    for (int i = 0; i < total; ++i) parent[i] = i;
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (auto [u, v] : edges) {
      if (u < 0 || v < 0 || u >= total || v >= total || u == v)
        throw std::invalid_argument("topology: bad edge");
      ++deg[u];
      ++deg[v];
      int ru = find(u), rv = find(v);
      if (ru == rv) throw std::invalid_argument("topology: cycle");
      parent[ru] = rv;
    }
    for (int s = c; s < total; ++s)
      if (deg[s] < 2) throw std::invalid_argument("topology: leaf steiner node");
  }
};

struct Placement {
  std::vector<Point> steiner;
  double cost = 0;
  std::vector<double> lengths;
};

struct ToleranceNotReached : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline Point norm_subgradient(const UnitBall& ball, Point v) {
  if (v.x == 0 && v.y == 0) return {0, 0};
  if (ball.is_ellipse()) {
    const auto& e = ball.ellipse_shape();
    double nv = ball.norm(v);
    if (nv <= 0) return {0, 0};
    return {(e.qxx * v.x + e.qxy * v.y) / nv, (e.qxy * v.x + e.qyy * v.y) / nv};
  }
  const auto& vs = ball.polygon_shape().vertices;
  std::size_t nf = vs.size();
  double best = -1;
  Point g{0, 0};
  for (std::size_t i = 0; i < nf; ++i) {
    Point a = vs[i], b = vs[(i + 1) % nf];
    Point e = b - a;
    Point n{e.y, -e.x};
    double bb = dot(n, a);
    double s = dot(n, v) / bb;
    if (s > best) {
      best = s;
      g = (1.0 / bb) * n;
    }
  }
  return g;
}

struct Objective {
  const TopologyInstance* inst;
  const CostFunction* cf;
  double lse_tau = 0;  // > 0: smoothed bottleneck
  mutable long evals = 0;

  int c() const { return static_cast<int>(inst->terminals.size()); }

  Point node(const std::vector<Point>& s, int idx) const {
    return idx < c() ? inst->terminals[idx] : s[idx - c()];
  }

  std::vector<double> edge_lengths(const std::vector<Point>& s) const {
    std::vector<double> ls;
    ls.reserve(inst->edges.size());
    for (auto [u, v] : inst->edges)
      ls.push_back(inst->ball->distance(node(s, u), node(s, v)));
    return ls;
  }

  double value(const std::vector<Point>& s) const {
    ++evals;
    auto ls = edge_lengths(s);
    if (lse_tau > 0) {
      double m = 0;
      for (double l : ls) m = std::max(m, l);
      double acc = 0;
      for (double l : ls) acc += std::exp((l - m) / lse_tau);
      return m + lse_tau * std::log(acc);
    }
    return evaluate_cost(*cf, ls);
  }

  std::vector<Point> gradient(const std::vector<Point>& s) const {
    auto ls = edge_lengths(s);
    std::vector<double> w(ls.size(), 1.0);
    if (lse_tau > 0) {
      double m = 0;
      for (double l : ls) m = std::max(m, l);
      double acc = 0;
      for (std::size_t e = 0; e < ls.size(); ++e) {
        w[e] = std::exp((ls[e] - m) / lse_tau);
        acc += w[e];
      }
      for (double& we : w) we /= acc;
    } else {
      switch (cf->kind) {
        case CostFunction::Kind::sum: break;
        case CostFunction::Kind::power:
          for (std::size_t e = 0; e < ls.size(); ++e)
            w[e] = ls[e] > 1e-300 ? cf->p * std::pow(ls[e], cf->p - 1) : 0.0;
          break;
        case CostFunction::Kind::bottleneck: {
          // Subgradient of the max: all weight on the canonically first argmax.
          double m = 0;
          std::size_t arg = 0;
          for (std::size_t e = 0; e < ls.size(); ++e)
            if (ls[e] > m) { m = ls[e]; arg = e; }
          std::fill(w.begin(), w.end(), 0.0);
          if (!ls.empty()) w[arg] = 1.0;
          break;
        }
      }
    }
    std::vector<Point> g(s.size(), Point{0, 0});
    for (std::size_t e = 0; e < inst->edges.size(); ++e) {
      auto [u, v] = inst->edges[e];
      if (w[e] == 0) continue;
      Point d = node(s, u) - node(s, v);
      Point sub = norm_subgradient(*inst->ball, d);
      if (u >= c()) g[u - c()] = g[u - c()] + w[e] * sub;
      if (v >= c()) g[v - c()] = g[v - c()] - w[e] * sub;
    }
    return g;
  }
};

inline void subgradient_phase(const Objective& obj, std::vector<Point>& s,
                              double step0, int iters) {
  std::vector<Point> best = s;
  double fbest = obj.value(s);
  std::vector<Point> cur = s;
  for (int t = 0; t < iters; ++t) {
    auto g = obj.gradient(cur);
    double gn = 0;
    for (Point gp : g) gn += norm2_sq(gp);
    gn = std::sqrt(gn);
    if (gn < 1e-15) break;
    double step = step0 / std::sqrt(t + 1.0);
    for (std::size_t j = 0; j < cur.size(); ++j)
      cur[j] = cur[j] - (step / gn) * g[j];
    double f = obj.value(cur);
    if (f < fbest) {
      fbest = f;
      best = cur;
    }
  }
  s = best;
}

// Compass search over all steiner coordinates; the 8-direction set rotates
// between rounds so narrow descent valleys cannot hide between probes.
// Shrinks the step until h_stop. Returns the achieved value.
inline double pattern_search(const Objective& obj, std::vector<Point>& s,
                             double h0, double h_stop, long eval_budget) {
  double f = obj.value(s);
  double h = h0;
  long start_evals = obj.evals;
  int round = 0;
  while (h > h_stop) {
    if (obj.evals - start_evals > eval_budget)
      throw ToleranceNotReached("fixed topology: evaluation budget exceeded");
    bool improved = false;
    double phase = (round % 3) * (M_PI / 12.0);
    for (std::size_t j = 0; j < s.size(); ++j) {
      for (int d = 0; d < 8; ++d) {
        double ang = phase + d * (M_PI / 4.0);
        Point dir{std::cos(ang), std::sin(ang)};
        std::vector<Point> cand = s;
        cand[j] = cand[j] + h * dir;
        double fc = obj.value(cand);
        if (fc < f - 1e-15 * (1.0 + std::abs(f))) {
          f = fc;
          s = std::move(cand);
          improved = true;
        }
      }
    }
    ++round;
    if (!improved) h *= 0.5;
  }
  return f;
}

// Newton polish for polygonal gauges with power cost p > 1: inside one
// assignment of active facets the objective is a smooth convex power sum, so
// a damped Newton step snaps into the piecewise-quadratic valleys the compass
// probes crawl along. Only accepted when the true objective improves.
inline void facet_newton_polish(const Objective& obj, std::vector<Point>& s,
                                double p) {
  const TopologyInstance& inst = *obj.inst;
  const auto& vs = inst.ball->polygon_shape().vertices;
  const std::size_t nfac = vs.size();
  const int c = static_cast<int>(inst.terminals.size());
  const int dim = 2 * static_cast<int>(s.size());
  double f = obj.value(s);
  for (int iter = 0; iter < 40; ++iter) {
    std::vector<double> grad(dim, 0.0);
    std::vector<std::vector<double>> hess(dim, std::vector<double>(dim, 0.0));
    for (auto [u, v] : inst.edges) {
      Point d = obj.node(s, u) - obj.node(s, v);
      double best = -1;
      Point n{0, 0};
      double bb = 1;
      for (std::size_t i = 0; i < nfac; ++i) {
        Point a = vs[i], b2 = vs[(i + 1) % nfac];
        Point e{b2.y - a.y, a.x - b2.x};
        double supp = dot(e, a);
        double val = dot(e, d) / supp;
        if (val > best) {
          best = val;
          n = e;
          bb = supp;
        }
      }
      if (best < 1e-12) continue;
      // dL/ds coefficients: +n/bb on u's block, -n/bb on v's block.
      std::array<std::pair<int, double>, 4> coef{};
      int nc = 0;
      auto add = [&](int node, double sign) {
        if (node < c) return;
        int j = node - c;
        coef[nc++] = {2 * j, sign * n.x / bb};
        coef[nc++] = {2 * j + 1, sign * n.y / bb};
      };
      add(u, 1.0);
      add(v, -1.0);
      double w1 = p * std::pow(best, p - 1);
      double w2 = p * (p - 1) * std::pow(best, p - 2);
      for (int a = 0; a < nc; ++a) {
        grad[coef[a].first] += w1 * coef[a].second;
        for (int b2 = 0; b2 < nc; ++b2)
          hess[coef[a].first][coef[b2].first] +=
              w2 * coef[a].second * coef[b2].second;
      }
    }
    double tr = 0;
    for (int i = 0; i < dim; ++i) tr += hess[i][i];
    for (int i = 0; i < dim; ++i) hess[i][i] += 1e-12 * (1 + tr);
    // Solve hess * delta = -grad by Gaussian elimination.
    std::vector<double> rhs(dim);
    for (int i = 0; i < dim; ++i) rhs[i] = -grad[i];
    for (int col = 0; col < dim; ++col) {
      int piv = col;
      for (int r = col + 1; r < dim; ++r)
        if (std::abs(hess[r][col]) > std::abs(hess[piv][col])) piv = r;
      std::swap(hess[piv], hess[col]);
      std::swap(rhs[piv], rhs[col]);
      if (std::abs(hess[col][col]) < 1e-300) return;
      for (int r = col + 1; r < dim; ++r) {
        double fr = hess[r][col] / hess[col][col];
        for (int cc = col; cc < dim; ++cc) hess[r][cc] -= fr * hess[col][cc];
        rhs[r] -= fr * rhs[col];
      }
    }
    std::vector<double> delta(dim);
    for (int r = dim - 1; r >= 0; --r) {
      double acc = rhs[r];
      for (int cc = r + 1; cc < dim; ++cc) acc -= hess[r][cc] * delta[cc];
      delta[r] = acc / hess[r][r];
    }
    bool accepted = false;
    double t = 1.0;
    for (int bt = 0; bt < 30; ++bt, t *= 0.5) {
      std::vector<Point> cand = s;
      for (std::size_t j = 0; j < cand.size(); ++j)
        cand[j] = cand[j] + Point{t * delta[2 * j], t * delta[2 * j + 1]};
      double fc = obj.value(cand);
      if (fc < f - 1e-16 * (1 + std::abs(f))) {
        f = fc;
        s = std::move(cand);
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
}

// Crease directions of a polygonal-gauge objective at the current placement:
// wherever an edge's top two facet forms nearly tie, the objective has a
// valley running along the tie line. Descent cones inside such valleys are
// far narrower than any fixed direction fan, so these lines are probed
// explicitly.
inline std::vector<Point> crease_directions(const Objective& obj,
                                            const std::vector<Point>& s) {
  const TopologyInstance& inst = *obj.inst;
  const auto& vs = inst.ball->polygon_shape().vertices;
  const std::size_t nfac = vs.size();
  std::vector<Point> dirs;
  for (auto [u, v] : inst.edges) {
    Point d = obj.node(s, u) - obj.node(s, v);
    std::vector<std::pair<double, Point>> forms;  // value, scaled normal
    for (std::size_t i = 0; i < nfac; ++i) {
      Point a = vs[i], b = vs[(i + 1) % nfac];
      Point n{b.y - a.y, a.x - b.x};
      double bb = dot(n, a);
      forms.push_back({dot(n, d) / bb, (1.0 / bb) * n});
    }
    std::sort(forms.begin(), forms.end(),
              [](const auto& x, const auto& y) { return x.first > y.first; });
    double top = forms[0].first;
    for (std::size_t i = 1; i < forms.size() && i < 3; ++i) {
      if (top - forms[i].first > 0.2 * (1 + std::abs(top))) break;
      Point diff = forms[0].second - forms[i].second;
      double len = norm2(diff);
      if (len < 1e-12) continue;
      dirs.push_back({-diff.y / len, diff.x / len});
    }
  }
  return dirs;
}

// Exact line minimisation: the objective is convex along every line, so
// ternary search nails each 1-D minimum. Crease directions are probed first,
// then a rotating fan.
inline double line_search_polish(const Objective& obj, std::vector<Point>& s,
                                 double h0) {
  double f = obj.value(s);
  auto line_eval = [&](std::size_t j, Point dir, double t) {
    std::vector<Point> cand = s;
    cand[j] = cand[j] + t * dir;
    return obj.value(cand);
  };
  auto try_dir = [&](std::size_t j, Point dir) {
    double lo = -h0, hi = h0;
    for (int it = 0; it < 90; ++it) {
      double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
      if (line_eval(j, dir, m1) <= line_eval(j, dir, m2))
        hi = m2;
      else
        lo = m1;
    }
    double t = 0.5 * (lo + hi);
    double ft = line_eval(j, dir, t);
    if (ft < f - 1e-15 * (1 + std::abs(f))) {
      f = ft;
      s[j] = s[j] + t * dir;
      return true;
    }
    return false;
  };
  for (int sweep = 0; sweep < 24; ++sweep) {
    bool improved = false;
    std::vector<Point> creases = crease_directions(obj, s);
    for (std::size_t j = 0; j < s.size(); ++j) {
      for (const Point& dir : creases) improved |= try_dir(j, dir);
      for (int d = 0; d < 32; ++d) {
        double ang = d * (M_PI / 32.0) + sweep * (M_PI / 1024.0);
        improved |= try_dir(j, {std::cos(ang), std::sin(ang)});
      }
    }
    if (!improved) break;
  }
  return f;
}

// Exact route for piecewise-linear objectives: polygonal gauge with sum or
// bottleneck cost is a linear program over steiner coordinates and edge
// epigraph variables.
inline std::optional<Placement> solve_piecewise_linear(
    const TopologyInstance& inst, const CostFunction& cf) {
  const int c = static_cast<int>(inst.terminals.size());
  const int ks = inst.steiner_count;
  const int ne = static_cast<int>(inst.edges.size());
  const bool bottleneck = cf.kind == CostFunction::Kind::bottleneck;
  const auto& vs = inst.ball->polygon_shape().vertices;
  const std::size_t nf = vs.size();

  LinearProgram lp;
  lp.nvars = 2 * ks + (bottleneck ? 1 : ne);
  lp.c.assign(lp.nvars, 0.0);
  if (bottleneck) {
    lp.c[2 * ks] = 1.0;
  } else {
    for (int e = 0; e < ne; ++e) lp.c[2 * ks + e] = 1.0;
  }
  for (int e = 0; e < ne; ++e) {
    auto [u, v] = inst.edges[e];
    for (std::size_t i = 0; i < nf; ++i) {
      Point a = vs[i], b = vs[(i + 1) % nf];
      Point edge = b - a;
      Point n{edge.y, -edge.x};
      double bb = dot(n, a);
      std::vector<double> row(lp.nvars, 0.0);
      double rhs = 0.0;
      auto add_node = [&](int node, double sign) {
        if (node < c) {
          rhs -= sign * dot(n, inst.terminals[node]) / bb;
        } else {
          int j = node - c;
          row[2 * j] += sign * n.x / bb;
          row[2 * j + 1] += sign * n.y / bb;
        }
      };
      add_node(u, 1.0);
      add_node(v, -1.0);
      row[2 * ks + (bottleneck ? 0 : e)] = -1.0;
      lp.rows.push_back(std::move(row));
      lp.rhs.push_back(rhs);
    }
  }
  LpResult res = solve_linear_program(lp);
  if (!res.ok) return std::nullopt;
  Placement pl;
  pl.steiner.resize(ks);
  for (int j = 0; j < ks; ++j) pl.steiner[j] = {res.w[2 * j], res.w[2 * j + 1]};
  Objective obj{&inst, &cf, 0.0};
  pl.lengths = obj.edge_lengths(pl.steiner);
  pl.cost = evaluate_cost(cf, pl.lengths);
  return pl;
}

}  // namespace detail

inline Placement solve_fixed_topology(const TopologyInstance& inst,
                                      const CostFunction& cf, double tol,
                                      long eval_budget = 1000000) {
  inst.validate();
  if (!(tol > 0)) throw std::invalid_argument("solve_fixed_topology: tol must be positive");
  const int c = static_cast<int>(inst.terminals.size());
  const int ks = inst.steiner_count;

  // Exact route: power-2 cost under an ellipse norm. The stationarity system
  // makes every steiner point the average of its neighbours; Q cancels.
  if (cf.kind == CostFunction::Kind::power && cf.p == 2.0 && inst.ball->is_ellipse()) {
    std::vector<std::vector<double>> A(ks, std::vector<double>(ks, 0.0));
    std::vector<double> bx(ks, 0.0), by(ks, 0.0);
    for (auto [u, v] : inst.edges) {
      for (int flip = 0; flip < 2; ++flip) {
        int a = flip ? v : u, b = flip ? u : v;
        if (a < c) continue;
        int i = a - c;
        A[i][i] += 1.0;
        if (b < c) {
          bx[i] += inst.terminals[b].x;
          by[i] += inst.terminals[b].y;
        } else {
          A[i][b - c] -= 1.0;
        }
      }
    }
    // Gaussian elimination with partial pivoting on the small SPD system.
    std::vector<std::vector<double>> M = A;
    std::vector<double> rx = bx, ry = by;
    for (int col = 0; col < ks; ++col) {
      int piv = col;
      for (int r = col + 1; r < ks; ++r)
        if (std::abs(M[r][col]) > std::abs(M[piv][col])) piv = r;
      std::swap(M[piv], M[col]);
      std::swap(rx[piv], rx[col]);
      std::swap(ry[piv], ry[col]);
      for (int r = col + 1; r < ks; ++r) {
        double f = M[r][col] / M[col][col];
        for (int cc = col; cc < ks; ++cc) M[r][cc] -= f * M[col][cc];
        rx[r] -= f * rx[col];
        ry[r] -= f * ry[col];
      }
    }
    Placement pl;
    pl.steiner.assign(ks, Point{});
    for (int r = ks - 1; r >= 0; --r) {
      double sx = rx[r], sy = ry[r];
      for (int cc = r + 1; cc < ks; ++cc) {
        sx -= M[r][cc] * pl.steiner[cc].x;
        sy -= M[r][cc] * pl.steiner[cc].y;
      }
      pl.steiner[r] = {sx / M[r][r], sy / M[r][r]};
    }
    detail::Objective obj{&inst, &cf, 0.0};
    pl.lengths = obj.edge_lengths(pl.steiner);
    pl.cost = evaluate_cost(cf, pl.lengths);
    return pl;
  }

  // Exact route: polygonal gauge with a piecewise-linear cost solves as a
  // linear program.
  if (inst.ball->is_polygon() &&
      (cf.kind == CostFunction::Kind::bottleneck ||
       cf.kind == CostFunction::Kind::sum ||
       (cf.kind == CostFunction::Kind::power && cf.p == 1.0))) {
    if (auto pl = detail::solve_piecewise_linear(inst, cf)) return *pl;
  }

  detail::Objective obj{&inst, &cf, 0.0};

  // Scale of the instance, for steps and jitter.
  Box tb = Box::bounding(inst.terminals);
  double diam = std::max(tb.diagonal(), 1e-9);

  // Multi-start: neighbour centroid plus jittered copies. The smooth convex
  // cases have a single basin, so one jittered extra start is a stall hedge;
  // polygonal-gauge powers (piecewise quadratic, prone to narrow valleys) and
  // non-convex power p < 1 keep the full set with longer subgradient runs.
  const bool hard_case =
      cf.kind == CostFunction::Kind::power &&
      (cf.p < 1.0 || inst.ball->is_polygon());
  const bool convex_case = !hard_case;
  std::vector<std::vector<Point>> starts;
  {
    std::vector<Point> s0(ks);
    for (int j = 0; j < ks; ++j) {
      Point acc{0, 0};
      int cnt = 0;
      for (auto [u, v] : inst.edges) {
        int a = -1;
        if (u == c + j && v < c) a = v;
        if (v == c + j && u < c) a = u;
        if (a >= 0) {
          acc = acc + inst.terminals[a];
          ++cnt;
        }
      }
      if (cnt == 0) {
        for (const Point& t : inst.terminals) acc = acc + t;
        cnt = c;
      }
      s0[j] = (1.0 / cnt) * acc;
    }
    starts.push_back(s0);
    std::mt19937_64 rng(0x5EEDC0DEull);
    std::uniform_real_distribution<double> jit(-0.25, 0.25);
    int extra = convex_case ? 1 : 4;
    for (int copy = 0; copy < extra; ++copy) {
      std::vector<Point> s = s0;
      for (Point& p : s) p = p + Point{jit(rng) * diam, jit(rng) * diam};
      starts.push_back(s);
    }
  }

  const bool bottleneck = cf.kind == CostFunction::Kind::bottleneck;
  std::vector<Point> best;
  double fbest = std::numeric_limits<double>::infinity();
  for (auto& s : starts) {
    std::vector<Point> cur = s;
    if (bottleneck) {
      for (double tau = 0.2 * diam; tau > 3e-6 * diam; tau *= 0.1) {
        detail::Objective smooth{&inst, &cf, tau};
        smooth.evals = obj.evals;
        detail::subgradient_phase(smooth, cur, 0.3 * diam, 80);
        obj.evals = smooth.evals;
      }
    } else {
      detail::subgradient_phase(obj, cur, 0.3 * diam, convex_case ? 80 : 300);
    }
    double f = detail::pattern_search(obj, cur, diam / 8.0,
                                      std::max(tol / (64.0 * ks), 1e-13 * diam),
                                      eval_budget);
    if (cf.kind == CostFunction::Kind::power && cf.p > 1.0 &&
        inst.ball->is_polygon()) {
      detail::facet_newton_polish(obj, cur, cf.p);
      f = detail::line_search_polish(obj, cur, diam / 16.0);
    }
    if (f < fbest) {
      fbest = f;
      best = cur;
    }
  }

  Placement pl;
  pl.steiner = best;
  pl.lengths = obj.edge_lengths(best);
  pl.cost = evaluate_cost(cf, pl.lengths);
  return pl;
}

}  // namespace ksteiner
