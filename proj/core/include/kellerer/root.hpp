#pragma once

// Root barrier for a convex-ordered pair, computed as the contact set of an
// explicit obstacle problem on potential functions, and the martingale
// kernel it induces through a trinomial walk matched to the scheme.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "kellerer/grid.hpp"
#include "kellerer/kernels.hpp"
#include "kellerer/measures.hpp"

namespace kellerer {

struct RootOptions {
  /// Contact when P_nu - v <= contact_tol. Default 1e-10 * (1 + max |P_nu|).
  std::optional<double> contact_tol;
  /// Stop once P_nu - v <= stop_tol on the support of nu.
  double stop_tol = 1e-8;
  /// Largest free (unabsorbed) mass tolerated at the horizon.
  double leak_tol = 1e-6;
  /// Largest nu-mass allowed on the two boundary grid points.
  double boundary_mass_tol = 1e-9;
  double order_tol = Tolerances{}.order;
  /// Time horizon of the walks run on the barrier. Default
  /// kWalkHorizonFactor * t_max.
  std::optional<double> walk_horizon;
};

inline constexpr double kWalkHorizonFactor = 20.0;

/// 4 (Var nu - Var mu) + 1.
double default_t_max(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

/// Space-time region {(n dt, x_i) : n >= entry_step[i]}. Storing a first
/// entry step per point makes the region closed upwards in time. The two
/// boundary points always belong to the barrier. Walks on the barrier stop
/// at walk_horizon, which may exceed grid.t_max: the region is defined for
/// all times.
class Barrier {
 public:
  static constexpr std::int64_t kNever = std::numeric_limits<std::int64_t>::max();

  Barrier(GridSpec grid, std::vector<std::int64_t> entry_step,
          std::optional<double> walk_horizon = std::nullopt);

  const GridSpec& grid() const { return grid_; }
  const std::vector<std::int64_t>& entry_steps() const { return entry_step_; }
  /// Entry time, +infinity when the point never enters.
  double entry_time(std::size_t i) const;
  bool contains(std::size_t i, std::int64_t step) const { return step >= entry_step_[i]; }
  double walk_horizon() const { return walk_horizon_; }
  /// Number of walk steps up to walk_horizon().
  std::int64_t horizon_steps() const;

 private:
  GridSpec grid_;
  std::vector<std::int64_t> entry_step_;
  double walk_horizon_;
};

enum class SolveStatus { Converged, HorizonReached };

/// Evidence produced by the obstacle solver.
struct ObstacleSolution {
  GridSpec grid;
  std::vector<double> initial;    // P_mu on the grid
  std::vector<double> obstacle;   // P_nu on the grid
  std::vector<double> potential;  // v at the last step
  double contact_tol = 0.0;
  double residual = 0.0;          // max P_nu - v on supp(nu)
  std::int64_t steps = 0;
  double final_time = 0.0;
  SolveStatus status = SolveStatus::HorizonReached;
  double max_decrease = 0.0;      // largest single-step drop of v
  double max_contact_gap = 0.0;   // largest P_nu - v - contact_tol after entry
};

struct RootSolution {
  Barrier barrier;
  ObstacleSolution obstacle;
};

/// Explicit scheme on potentials: v^0 = P_mu, heat step with ratio
/// dt / (2 h^2), clamp at P_nu, boundary held at P_nu. Throws
/// std::invalid_argument if the pair is not in convex order or not on grid.
RootSolution solve_barrier(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                           const GridSpec& grid, const RootOptions& options = {});

struct KernelExtraction {
  MartingaleKernel kernel;
  std::vector<double> unabsorbed;  // free mass left at the horizon, per source
  double max_unabsorbed = 0.0;
  bool leak_ok = true;
};

/// Exact law of the walk started at each source and stopped on entering the
/// barrier (or at the walk horizon, where leftover mass stays in place).
KernelExtraction extract_kernel(std::span<const double> sources, const Barrier& barrier,
                                const RootOptions& options = {});
KernelExtraction extract_kernel(const DiscreteMeasure& mu, const Barrier& barrier,
                                const RootOptions& options = {});

struct EmbedResult {
  DiscreteMeasure empirical;
  std::size_t truncated = 0;  // paths still free at the horizon
};

/// Simulates n_paths walks from mu-distributed starts until absorption.
/// Path p draws from PhiloxStream(seed, p), so results are bit-identical for
/// a given seed whatever the block split.
EmbedResult monte_carlo_embed(const DiscreteMeasure& mu, const Barrier& barrier,
                              std::size_t n_paths, std::uint64_t seed);

struct IsotoneCheck {
  bool holds = true;
  std::size_t paths = 0;
  std::size_t violations = 0;
};

/// Runs walks from x <= x_prime on the same noise and checks that the
/// absorbed values stay ordered on every path.
IsotoneCheck isotone_hitting_check(const Barrier& barrier, double x, double x_prime,
                                   std::size_t n_paths, std::uint64_t seed);

}  // namespace kellerer
