#pragma once

// Small dense two-phase simplex for the piecewise-linear fixed-topology
// instances (polygonal gauges with sum or bottleneck costs). Minimises c.w
// subject to A w <= b with free variables; Bland's rule keeps the pivot
// sequence deterministic and cycle-free. Problem sizes here are tiny
// (tens of variables, a few hundred rows).

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace ksteiner {

struct LinearProgram {
  // minimise c . w   s.t.  rows[r] . w <= rhs[r], w free
  int nvars = 0;
  std::vector<double> c;
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;
};

struct LpResult {
  bool ok = false;
  std::vector<double> w;
  double value = 0;
};

namespace lp_detail {

// Simplex on: minimise c.x, Ax = b, x >= 0, b >= 0, starting from the given
// basis of artificial/slack columns.
class Tableau {
 public:
  Tableau(std::vector<std::vector<double>> a, std::vector<double> b,
          std::vector<double> c, std::vector<int> basis)
      : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)),
        basis_(std::move(basis)), m_(static_cast<int>(a_.size())),
        n_(static_cast<int>(c_.size())) {}

  bool solve(int max_iters = 100000) {
    std::vector<double> y(m_), redcost(n_);
    for (int iter = 0; iter < max_iters; ++iter) {
      // Reduced costs via the explicit basis inverse action: maintain the
      // tableau directly instead (a_ holds the current tableau).
      int enter = -1;
      for (int j = 0; j < n_; ++j) {
        if (is_basic(j)) continue;
        double rc = c_[j];
        for (int r = 0; r < m_; ++r) rc -= c_[basis_[r]] * a_[r][j];
        if (rc < -1e-10) {  // Bland: first improving column
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;  // optimal
      int leave = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (int r = 0; r < m_; ++r) {
        if (a_[r][enter] > 1e-12) {
          double ratio = b_[r] / a_[r][enter];
          if (ratio < best_ratio - 1e-15 ||
              (ratio < best_ratio + 1e-15 &&
               (leave < 0 || basis_[r] < basis_[leave]))) {
            best_ratio = ratio;
            leave = r;
          }
        }
      }
      if (leave < 0) return false;  // unbounded
      pivot(leave, enter);
    }
    return false;
  }

  void pivot(int r, int j) {
    double p = a_[r][j];
    for (int col = 0; col < n_; ++col) a_[r][col] /= p;
    b_[r] /= p;
    for (int row = 0; row < m_; ++row) {
      if (row == r) continue;
      double f = a_[row][j];
      if (f == 0) continue;
      for (int col = 0; col < n_; ++col) a_[row][col] -= f * a_[r][col];
      b_[row] -= f * b_[r];
    }
    basis_[r] = j;
  }

  bool is_basic(int j) const {
    for (int r = 0; r < m_; ++r)
      if (basis_[r] == j) return true;
    return false;
  }

  double objective() const {
    double v = 0;
    for (int r = 0; r < m_; ++r) v += c_[basis_[r]] * b_[r];
    return v;
  }

  std::vector<double> primal(int take) const {
    std::vector<double> x(take, 0.0);
    for (int r = 0; r < m_; ++r)
      if (basis_[r] < take) x[basis_[r]] = b_[r];
    return x;
  }

  const std::vector<int>& basis() const { return basis_; }

  // Same tableau state under a different objective (phase 1 -> phase 2).
  Tableau with_costs(std::vector<double> c) const {
    return Tableau(a_, b_, std::move(c), basis_);
  }

 private:
  std::vector<std::vector<double>> a_;
  std::vector<double> b_;
  std::vector<double> c_;
  std::vector<int> basis_;
  int m_, n_;
};

}  // namespace lp_detail

inline LpResult solve_linear_program(const LinearProgram& lp) {
  const int m = static_cast<int>(lp.rows.size());
  const int nf = lp.nvars;
  // Columns: w+ (nf), w- (nf), slack (m), artificial (m as needed).
  const int ncols = 2 * nf + m;
  std::vector<std::vector<double>> a(m, std::vector<double>(ncols + m, 0.0));
  std::vector<double> b(m);
  for (int r = 0; r < m; ++r) {
    double sign = lp.rhs[r] >= 0 ? 1.0 : -1.0;
    for (int j = 0; j < nf; ++j) {
      a[r][j] = sign * lp.rows[r][j];
      a[r][nf + j] = -sign * lp.rows[r][j];
    }
    a[r][2 * nf + r] = sign;  // slack
    b[r] = sign * lp.rhs[r];
  }
  // Phase 1: artificials with unit cost.
  std::vector<int> basis(m);
  std::vector<double> c1(ncols + m, 0.0);
  for (int r = 0; r < m; ++r) {
    a[r][ncols + r] = 1.0;
    c1[ncols + r] = 1.0;
    basis[r] = ncols + r;
  }
  lp_detail::Tableau t1(a, b, c1, basis);
  if (!t1.solve()) return {};
  if (t1.objective() > 1e-7) return {};  // infeasible

  // Phase 2 rebuilds from the phase-1 tableau: forbid artificials by cost.
  std::vector<double> c2(ncols + m, 0.0);
  for (int j = 0; j < nf; ++j) {
    c2[j] = lp.c[j];
    c2[nf + j] = -lp.c[j];
  }
  for (int r = 0; r < m; ++r) c2[ncols + r] = 1e9;
  // Continue from the phase-1 basis: copy its state through a fresh solve.
  lp_detail::Tableau t2 = t1.with_costs(c2);
  if (!t2.solve()) return {};
  LpResult res;
  res.ok = true;
  auto split = t2.primal(2 * nf);
  res.w.assign(nf, 0.0);
  for (int j = 0; j < nf; ++j) res.w[j] = split[j] - split[nf + j];
  res.value = 0;
  for (int j = 0; j < nf; ++j) res.value += lp.c[j] * res.w[j];
  return res;
}

}  // namespace ksteiner
