#pragma once

#include <cstddef>
#include <optional>

namespace kellerer {

/// Uniform space-time grid. Space points are x_min + i * h for
/// i = 0 .. num_points() - 1; time steps are multiples of dt up to t_max.
struct GridSpec {
  double x_min = -1.0;
  double x_max = 1.0;
  double h = 0.1;
  double dt = 0.01;
  double t_max = 1.0;

  /// Throws std::invalid_argument unless (x_max - x_min) / h is an integer
  /// >= 2, dt <= h^2 and every step is positive.
  void validate() const;

  std::size_t num_points() const;
  double point(std::size_t i) const { return x_min + static_cast<double>(i) * h; }
  /// Index of the grid point equal to x up to 1e-9 * h, if any.
  std::optional<std::size_t> index_of(double x) const;
  /// Probability of each +/-h move in the walk matched to the heat stencil.
  double move_probability() const { return dt / (2.0 * h * h); }
};

}  // namespace kellerer
