#include "kellerer/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace kellerer {

namespace {
constexpr double kIntegralSlack = 1e-9;
}

void GridSpec::validate() const {
  if (!(h > 0.0) || !(dt > 0.0) || !(t_max > 0.0)) {
    throw std::invalid_argument("grid: h, dt and t_max must be positive");
  }
  if (!(x_max > x_min)) {
    throw std::invalid_argument("grid: x_max must exceed x_min");
  }
  const double cells = (x_max - x_min) / h;
  if (std::abs(cells - std::round(cells)) > kIntegralSlack * std::max(1.0, cells)) {
    throw std::invalid_argument("grid: (x_max - x_min) / h must be an integer");
  }
  if (std::round(cells) < 2.0) {
    throw std::invalid_argument("grid: need at least two cells");
  }
  if (dt > h * h * (1.0 + 1e-12)) {
    throw std::invalid_argument("grid: explicit scheme needs dt <= h^2");
  }
}

std::size_t GridSpec::num_points() const {
  return static_cast<std::size_t>(std::llround((x_max - x_min) / h)) + 1;
}

std::optional<std::size_t> GridSpec::index_of(double x) const {
  const double pos = (x - x_min) / h;
  const double r = std::round(pos);
  if (r < 0.0 || r > static_cast<double>(num_points() - 1)) return std::nullopt;
  const auto i = static_cast<std::size_t>(r);
  if (std::abs(point(i) - x) > 1e-9 * h) return std::nullopt;
  return i;
}

}  // namespace kellerer
