#pragma once

// Families of measures increasing in convex order.

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kellerer/measures.hpp"

namespace kellerer {

/// Measures on an ascending time grid in [0, 1] ending at 1.
///
/// The constructor only checks that the two sequences are non-empty and of
/// equal length; time-grid and convex-order requirements are reported by
/// `validate` so that malformed inputs can be diagnosed instead of thrown.
class Peacock {
 public:
  Peacock(std::vector<double> times, std::vector<DiscreteMeasure> measures);

  const std::vector<double>& times() const { return times_; }
  const std::vector<DiscreteMeasure>& measures() const { return measures_; }
  std::size_t size() const { return times_.size(); }

 private:
  std::vector<double> times_;
  std::vector<DiscreteMeasure> measures_;
};

struct PairVerdict {
  std::size_t index = 0;  // pair (index, index + 1)
  bool in_order = false;
  double mean_gap = 0.0;
  double worst_call_violation = 0.0;
  double worst_strike = 0.0;
};

struct PeacockReport {
  bool pass = false;
  std::vector<std::string> structural_errors;
  std::vector<PairVerdict> pairs;
  std::optional<std::size_t> first_failing_pair;
};

PeacockReport validate(const Peacock& p, double tol = Tolerances{}.order);

/// Integral of sqrt(1 + y^2), the strictly convex, linearly growing test
/// function whose integral orders a peacock.
double phi_integral(const DiscreteMeasure& mu);

/// Measures indexed by an arbitrary totally ordered label type.
template <typename Label, typename Less = std::less<Label>>
struct LabeledFamily {
  std::vector<Label> labels;
  std::vector<DiscreteMeasure> measures;
  Less less{};
};

namespace detail {
Peacock reparametrize_sequence(const std::vector<DiscreteMeasure>& measures,
                               double tol);
}

/// Re-indexes a convex-order increasing family by its rescaled
/// phi-integrals so that the last measure sits at time 1. Entries with equal
/// phi-integral are the same measure and collapse to one. A constant
/// family becomes a single entry at time 1.
template <typename Label, typename Less>
Peacock reparametrize(const LabeledFamily<Label, Less>& family,
                      double tol = Tolerances{}.order) {
  if (family.labels.size() != family.measures.size() || family.labels.empty()) {
    throw std::invalid_argument("reparametrize: need one measure per label");
  }
  for (std::size_t i = 0; i + 1 < family.labels.size(); ++i) {
    if (!family.less(family.labels[i], family.labels[i + 1])) {
      throw std::invalid_argument("reparametrize: labels are not strictly increasing");
    }
  }
  return detail::reparametrize_sequence(family.measures, tol);
}

/// Mixture interpolation (1 - lambda) nu_a + lambda nu_b inside a gap.
DiscreteMeasure interpolate(const Peacock& p, double s);

struct RightContinuityReport {
  std::vector<double> phi_integrals;
  bool non_decreasing = false;
  double max_jump = 0.0;
  std::size_t max_jump_index = 0;  // jump between entries i and i + 1
  double max_decrease = 0.0;
};

RightContinuityReport right_continuity_report(const Peacock& p,
                                              double tol = Tolerances{}.order);

/// Mean-preserving discretization of N(mean, variance) on the interior
/// points of the grid (the two boundary points carry no mass).
DiscreteMeasure discretized_gaussian(double mean, double variance,
                                     const GridSpec& grid);

}  // namespace kellerer
