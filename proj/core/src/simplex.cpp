#include "kellerer/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace kellerer {

namespace {

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : rows_(rows), width_(cols + 1), data_((rows + 1) * (cols + 1), 0.0), basis_(rows, 0) {}

  double& at(std::size_t r, std::size_t c) { return data_[r * width_ + c]; }
  double& rhs(std::size_t r) { return data_[r * width_ + width_ - 1]; }
  double& cost(std::size_t c) { return data_[rows_ * width_ + c]; }
  double& objective() { return data_[rows_ * width_ + width_ - 1]; }
  std::size_t& basis(std::size_t r) { return basis_[r]; }

  void pivot(std::size_t r, std::size_t c) {
    double* row = &data_[r * width_];
    const double inv = 1.0 / row[c];
    for (std::size_t j = 0; j < width_; ++j) row[j] *= inv;
    row[c] = 1.0;
    for (std::size_t i = 0; i <= rows_; ++i) {
      if (i == r) continue;
      double* other = &data_[i * width_];
      const double factor = other[c];
      if (factor == 0.0) continue;
      for (std::size_t j = 0; j < width_; ++j) other[j] -= factor * row[j];
      other[c] = 0.0;
    }
    basis_[r] = c;
  }

 private:
  std::size_t rows_;
  std::size_t width_;
  std::vector<double> data_;
  std::vector<std::size_t> basis_;
};

enum class Outcome { Optimal, Unbounded, IterationLimit };

// Runs Bland's rule on columns [0, allowed). Rows flagged dead are skipped.
Outcome iterate(Tableau& t, std::size_t rows, std::size_t allowed, const std::vector<bool>& dead,
                const SimplexOptions& opt, std::size_t& pivots) {
  for (;;) {
    std::size_t enter = allowed;
    for (std::size_t j = 0; j < allowed; ++j) {
      if (t.cost(j) < -opt.pivot_tol) {
        enter = j;
        break;
      }
    }
    if (enter == allowed) return Outcome::Optimal;
    std::size_t leave = rows;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < rows; ++i) {
      if (dead[i]) continue;
      const double a = t.at(i, enter);
      if (a <= opt.pivot_tol) continue;
      const double ratio = t.rhs(i) / a;
      if (leave == rows || ratio < best - 1e-12) {
        best = ratio;
        leave = i;
      } else if (ratio <= best + 1e-12 && t.basis(i) < t.basis(leave)) {
        best = std::min(best, ratio);
        leave = i;
      }
    }
    if (leave == rows) return Outcome::Unbounded;
    if (++pivots > opt.max_pivots) return Outcome::IterationLimit;
    t.pivot(leave, enter);
  }
}

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& opt) {
  const std::size_t m = lp.rows;
  const std::size_t n = lp.cols;
  if (lp.a.size() != m * n || lp.b.size() != m || lp.c.size() != n) {
    throw std::invalid_argument("simplex: inconsistent dimensions");
  }
  Tableau t(m, n + m);
  for (std::size_t i = 0; i < m; ++i) {
    const double sign = lp.b[i] < 0.0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n; ++j) t.at(i, j) = sign * lp.a[i * n + j];
    t.at(i, n + i) = 1.0;
    t.rhs(i) = sign * lp.b[i];
    t.basis(i) = n + i;
  }
  // Phase 1: minimize the sum of artificials.
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += t.at(i, j);
    t.cost(j) = -s;
  }
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) total += t.rhs(i);
  t.objective() = -total;

  LpSolution sol;
  std::vector<bool> dead(m, false);
  Outcome out = iterate(t, m, n + m, dead, opt, sol.pivots);
  if (out == Outcome::IterationLimit) {
    sol.status = LpStatus::IterationLimit;
    return sol;
  }
  sol.phase1_residual = -t.objective();
  if (sol.phase1_residual > opt.feasibility_tol) {
    sol.status = LpStatus::Infeasible;
    return sol;
  }
  // Drive remaining artificials out of the basis; rows where that is
  // impossible are linearly dependent on the others.
  for (std::size_t i = 0; i < m; ++i) {
    if (t.basis(i) < n) continue;
    std::size_t col = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(t.at(i, j)) > opt.pivot_tol) {
        col = j;
        break;
      }
    }
    if (col == n) {
      dead[i] = true;
    } else {
      t.pivot(i, col);
    }
  }
  // Phase 2 reduced costs.
  for (std::size_t j = 0; j < n + m; ++j) t.cost(j) = j < n ? lp.c[j] : 0.0;
  t.objective() = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (dead[i]) continue;
    const std::size_t bi = t.basis(i);
    const double cb = bi < n ? lp.c[bi] : 0.0;
    if (cb == 0.0) continue;
    for (std::size_t j = 0; j < n + m; ++j) t.cost(j) -= cb * t.at(i, j);
    t.objective() -= cb * t.rhs(i);
  }
  out = iterate(t, m, n, dead, opt, sol.pivots);
  if (out == Outcome::Unbounded) {
    sol.status = LpStatus::Unbounded;
    return sol;
  }
  if (out == Outcome::IterationLimit) {
    sol.status = LpStatus::IterationLimit;
    return sol;
  }
  sol.x.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    if (!dead[i] && t.basis(i) < n) sol.x[t.basis(i)] = std::max(0.0, t.rhs(i));
  }
  sol.objective = 0.0;
  for (std::size_t j = 0; j < n; ++j) sol.objective += lp.c[j] * sol.x[j];
  sol.status = LpStatus::Optimal;
  return sol;
}

}  // namespace kellerer
