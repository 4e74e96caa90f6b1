#pragma once

// Generators and independent reference computations shared by the test
// binaries.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "kellerer/kernels.hpp"
#include "kellerer/measures.hpp"

namespace kellerer::testing {

using Rng = std::mt19937_64;

inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

inline int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

/// Up to max_atoms distinct atoms on the lattice step * Z within [-span, span].
inline DiscreteMeasure random_measure(Rng& rng, int max_atoms, int span = 8, double step = 0.5) {
  const int n = uniform_int(rng, 1, max_atoms);
  std::vector<int> ks;
  while (static_cast<int>(ks.size()) < n) {
    const int k = uniform_int(rng, -span, span);
    if (std::find(ks.begin(), ks.end(), k) == ks.end()) ks.push_back(k);
  }
  std::vector<double> xs;
  std::vector<double> ws;
  for (int k : ks) {
    xs.push_back(k * step);
    ws.push_back(0.05 + uniform01(rng));
  }
  return DiscreteMeasure::from_unnormalized(std::move(xs), std::move(ws));
}

/// Random martingale kernel on the given sources: each source splits into
/// at most `branches` lattice points straddling it, with weights fixed by
/// the mean constraint.
inline MartingaleKernel random_martingale_kernel(Rng& rng, const std::vector<double>& sources,
                                                 double step = 0.5, int branches = 3) {
  std::vector<DiscreteMeasure> targets;
  for (double x : sources) {
    const int pieces = uniform_int(rng, 1, branches);
    std::vector<DiscreteMeasure> parts;
    std::vector<double> coeffs;
    for (int p = 0; p < pieces; ++p) {
      const double a = step * uniform_int(rng, 0, 4);
      const double b = step * uniform_int(rng, 1, 4);
      if (a == 0.0) {
        parts.push_back(DiscreteMeasure::dirac(x));
      } else {
        parts.push_back(DiscreteMeasure({x - a, x + b}, {b / (a + b), a / (a + b)}));
      }
      coeffs.push_back(1.0 / pieces);
    }
    targets.push_back(mixture(parts, coeffs));
  }
  return MartingaleKernel(sources, std::move(targets));
}

inline std::vector<double> atoms_of(const DiscreteMeasure& mu) {
  return {mu.atoms().begin(), mu.atoms().end()};
}

/// mu and a measure that dominates it in convex order.
inline std::pair<DiscreteMeasure, DiscreteMeasure> random_ordered_pair(Rng& rng, int max_atoms,
                                                                       double step = 0.5) {
  const DiscreteMeasure mu = random_measure(rng, max_atoms, 6, step);
  const MartingaleKernel k = random_martingale_kernel(rng, atoms_of(mu), step, 2);
  return {mu, pushforward(mu, k)};
}

/// W1 through quantile functions: integral over u of |F_a^-1(u) - F_b^-1(u)|.
inline double quantile_w1(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  std::vector<double> cuts{0.0, 1.0};
  double s = 0.0;
  for (double w : a.weights()) cuts.push_back(s += w);
  s = 0.0;
  for (double w : b.weights()) cuts.push_back(s += w);
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double len = std::min(cuts[i + 1], 1.0) - cuts[i];
    if (len <= 0.0) continue;
    const double u = cuts[i] + 0.5 * len;
    total += len * std::abs(quantile(a, u) - quantile(b, u));
  }
  return total;
}

/// Convex order through potentials at every atom and far outside the
/// supports, plus equal means.
inline bool potential_order(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double tol) {
  if (std::abs(mean(mu) - mean(nu)) > tol) return false;
  std::vector<double> pts = union_atoms(mu, nu);
  pts.push_back(pts.front() - 1.0);
  pts.push_back(pts.back() + 1.0);
  for (double x : pts) {
    double pm = 0.0;
    double pn = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) pm += mu.weights()[i] * std::abs(x - mu.atoms()[i]);
    for (std::size_t i = 0; i < nu.size(); ++i) pn += nu.weights()[i] * std::abs(x - nu.atoms()[i]);
    if (pm > pn + tol) return false;
  }
  return true;
}

inline bool same_measure(const DiscreteMeasure& a, const DiscreteMeasure& b, double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a.atoms()[i] - b.atoms()[i]) > tol) return false;
    if (std::abs(a.weights()[i] - b.weights()[i]) > tol) return false;
  }
  return true;
}

}  // namespace kellerer::testing

#include <limits>
#include <optional>

#include "kellerer/simplex.hpp"

namespace kellerer::testing {

/// Minimum of c.x over {A x = b, x >= 0} by enumerating every column subset
/// with independent columns, solving for the unique basic solution, and
/// keeping the nonnegative ones. Exponential; only for tiny programs.
inline std::optional<double> vertex_minimum(const LinearProgram& lp, double tol = 1e-9) {
  const std::size_t n = lp.cols;
  const std::size_t m = lp.rows;
  std::optional<double> best;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<std::size_t> cols;
    for (std::size_t j = 0; j < n; ++j) {
      if (mask >> j & 1U) cols.push_back(j);
    }
    if (cols.size() > m) continue;
    const std::size_t k = cols.size();
    // Augmented matrix [A_S | b], Gaussian elimination with partial pivoting.
    std::vector<std::vector<double>> a(m, std::vector<double>(k + 1));
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c < k; ++c) a[r][c] = lp.a[r * n + cols[c]];
      a[r][k] = lp.b[r];
    }
    bool independent = true;
    std::size_t row = 0;
    for (std::size_t c = 0; c < k; ++c, ++row) {
      std::size_t piv = row;
      for (std::size_t r = row; r < m; ++r) {
        if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
      }
      if (std::abs(a[piv][c]) < 1e-12) {
        independent = false;
        break;
      }
      std::swap(a[piv], a[row]);
      for (std::size_t r = 0; r < m; ++r) {
        if (r == row) continue;
        const double f = a[r][c] / a[row][c];
        for (std::size_t cc = c; cc <= k; ++cc) a[r][cc] -= f * a[row][cc];
      }
    }
    if (!independent) continue;
    bool consistent = true;
    for (std::size_t r = k; r < m; ++r) {
      if (std::abs(a[r][k]) > tol) consistent = false;
    }
    if (!consistent) continue;
    double value = 0.0;
    bool nonneg = true;
    for (std::size_t c = 0; c < k; ++c) {
      const double x = a[c][k] / a[c][c];
      if (x < -tol) nonneg = false;
      value += lp.c[cols[c]] * x;
    }
    if (nonneg && (!best || value < *best)) best = value;
  }
  return best;
}

}  // namespace kellerer::testing
