#pragma once

// Dense two-phase simplex for small equality-form linear programs.

#include <cstddef>
#include <vector>

namespace kellerer {

/// minimize c.x subject to A x = b, x >= 0. A is row-major, rows x cols.
struct LinearProgram {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> a;
  std::vector<double> b;
  std::vector<double> c;

  LinearProgram(std::size_t rows, std::size_t cols)
      : rows(rows), cols(cols), a(rows * cols, 0.0), b(rows, 0.0), c(cols, 0.0) {}
  double& at(std::size_t r, std::size_t col) { return a[r * cols + col]; }
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> x;
  double objective = 0.0;
  double phase1_residual = 0.0;  // sum of artificials at the end of phase 1
  std::size_t pivots = 0;
};

struct SimplexOptions {
  double pivot_tol = 1e-9;
  double feasibility_tol = 1e-9;
  std::size_t max_pivots = 200000;
};

/// Bland's rule throughout, so the method cannot cycle.
LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& options = {});

}  // namespace kellerer
