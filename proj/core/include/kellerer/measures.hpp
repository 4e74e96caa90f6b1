#pragma once

// Finitely supported probability measures on the real line.

#include <cstddef>
#include <span>
#include <vector>

#include "kellerer/grid.hpp"

namespace kellerer {

/// Default tolerances shared across the library. All of them can be
/// overridden per call.
struct Tolerances {
  double mass = 1e-12;
  double mean = 1e-9;
  double order = 1e-9;
};

/// A probability measure with finitely many atoms.
///
/// Atoms are kept strictly increasing and every stored weight is positive.
/// Construction sorts the input, merges duplicate atoms, drops weights below
/// 1e-15 and renormalizes. Input weights must already sum to one within
/// `kConstructionMassTolerance`; use `from_unnormalized` for raw masses.
class DiscreteMeasure {
 public:
  static constexpr double kDropWeight = 1e-15;
  static constexpr double kConstructionMassTolerance = 1e-9;

  DiscreteMeasure(std::vector<double> atoms, std::vector<double> weights);

  static DiscreteMeasure dirac(double x);
  /// Uniform measure on the given (not necessarily sorted) points.
  static DiscreteMeasure uniform(std::vector<double> points);
  /// Accepts any nonnegative masses with positive total and normalizes.
  static DiscreteMeasure from_unnormalized(std::vector<double> atoms,
                                           std::vector<double> masses);

  std::span<const double> atoms() const { return atoms_; }
  std::span<const double> weights() const { return weights_; }
  std::size_t size() const { return atoms_.size(); }
  double min_atom() const { return atoms_.front(); }
  double max_atom() const { return atoms_.back(); }

  friend bool operator==(const DiscreteMeasure&,
                         const DiscreteMeasure&) = default;

 private:
  DiscreteMeasure() = default;
  std::vector<double> atoms_;
  std::vector<double> weights_;
};

double mean(const DiscreteMeasure& mu);
double variance(const DiscreteMeasure& mu);

/// Right-continuous distribution function F(x) = mu((-inf, x]).
double cdf(const DiscreteMeasure& mu, double x);

/// Left-continuous generalized inverse inf{x : F(x) >= p}, p in (0, 1].
double quantile(const DiscreteMeasure& mu, double p);

/// P(x) = integral of |x - y| dmu(y).
double potential(const DiscreteMeasure& mu, double x);

/// Potential evaluated at many points.
std::vector<double> potential_at(const DiscreteMeasure& mu,
                                 std::span<const double> points);

/// integral of (y - strike)_+ dmu(y).
double call_price(const DiscreteMeasure& mu, double strike);

/// Exact Wasserstein-1 distance, the integral of |F_alpha - F_beta|.
double w1(const DiscreteMeasure& alpha, const DiscreteMeasure& beta);

/// Sorted union of the atoms of both measures.
std::vector<double> union_atoms(const DiscreteMeasure& a,
                                const DiscreteMeasure& b);

/// Largest amount by which call_price(mu, K) exceeds call_price(nu, K) over
/// the union of atoms, together with the maximizing strike.
struct CallViolation {
  double amount = 0.0;
  double strike = 0.0;
};
CallViolation worst_call_violation(const DiscreteMeasure& mu,
                                   const DiscreteMeasure& nu);

/// mu precedes nu in convex order. Call functions are piecewise linear, so
/// checking the kinks plus equal means is exact.
bool convex_order(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                  double tol = Tolerances{}.order);

/// alpha is dominated by beta in first order: F_alpha >= F_beta - tol.
bool fsd(const DiscreteMeasure& alpha, const DiscreteMeasure& beta,
         double tol = Tolerances{}.order);

/// Mixture sum_k coeffs[k] * parts[k]; coefficients must be a probability
/// vector.
DiscreteMeasure mixture(std::span<const DiscreteMeasure> parts,
                        std::span<const double> coeffs);

/// Splits each atom between its two neighbouring grid points so that the
/// mean is preserved. Throws std::out_of_range for atoms outside the grid.
DiscreteMeasure project_to_grid(const DiscreteMeasure& mu,
                                const GridSpec& grid);

}  // namespace kellerer
