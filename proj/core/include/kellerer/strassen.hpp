#pragma once

// Martingale couplings between convex-ordered measures by linear
// programming. Independent of the Root construction.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "kellerer/kernels.hpp"
#include "kellerer/measures.hpp"
#include "kellerer/simplex.hpp"

namespace kellerer {

using CostFunction = std::function<double(double, double)>;

/// Couplings gamma_ij >= 0 of mu (rows) and nu (columns), optionally with
/// the martingale rows sum_j gamma_ij (y_j - x_i) = 0.
struct TransportLP {
  std::vector<double> row_marginal;
  std::vector<double> column_marginal;
  std::vector<double> sources;
  std::vector<double> targets;
  std::optional<std::vector<double>> cost;  // row-major, rows x columns

  static TransportLP between(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                             const CostFunction& cost = nullptr);
  LinearProgram to_lp(bool martingale) const;
};

inline constexpr std::size_t kDefaultCouplingCap = 10'000;

enum class CouplingStatus { Feasible, Infeasible, NumericalFailure };

struct CouplingResult {
  CouplingStatus status = CouplingStatus::NumericalFailure;
  std::optional<MartingaleKernel> kernel;
  /// For Infeasible: the most violated convex-order constraint, readable.
  std::string certificate;
  double mean_gap = 0.0;
  CallViolation violation;
  double martingale_error = 0.0;
};

/// Finds some martingale coupling of mu and nu, or reports why none
/// exists. Throws std::length_error when |supp mu| * |supp nu| > cap.
CouplingResult feasible_coupling(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                 std::size_t cap = kDefaultCouplingCap);

/// Optimal martingale coupling for the given cost. Throws
/// std::invalid_argument if no martingale coupling exists.
MartingaleKernel min_cost_coupling(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                   const CostFunction& cost,
                                   std::size_t cap = kDefaultCouplingCap);

/// Classical (non-martingale) optimal transport value by the simplex.
double min_cost_transport(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                          const CostFunction& cost);

}  // namespace kellerer
