#include "kellerer/peacock.hpp"

#include <algorithm>
#include <cmath>

namespace kellerer {

Peacock::Peacock(std::vector<double> times, std::vector<DiscreteMeasure> measures)
    : times_(std::move(times)), measures_(std::move(measures)) {
  if (times_.empty() || times_.size() != measures_.size()) {
    throw std::invalid_argument("peacock: need one measure per time and at least one time");
  }
}

PeacockReport validate(const Peacock& p, double tol) {
  PeacockReport report;
  const auto& t = p.times();
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!std::isfinite(t[i]) || t[i] < 0.0 || t[i] > 1.0) {
      report.structural_errors.push_back("time " + std::to_string(i) + " is outside [0, 1]");
    }
    if (i > 0 && !(t[i] > t[i - 1])) {
      report.structural_errors.push_back("times " + std::to_string(i - 1) + " and " +
                                         std::to_string(i) + " are not strictly increasing");
    }
  }
  if (t.back() != 1.0) report.structural_errors.push_back("final time must be 1");

  const auto& ms = p.measures();
  for (std::size_t i = 0; i + 1 < ms.size(); ++i) {
    PairVerdict v;
    v.index = i;
    v.mean_gap = std::abs(mean(ms[i]) - mean(ms[i + 1]));
    const auto worst = worst_call_violation(ms[i], ms[i + 1]);
    v.worst_call_violation = worst.amount;
    v.worst_strike = worst.strike;
    v.in_order = v.mean_gap <= tol && worst.amount <= tol;
    if (!v.in_order && !report.first_failing_pair) report.first_failing_pair = i;
    report.pairs.push_back(v);
  }
  report.pass = report.structural_errors.empty() && !report.first_failing_pair;
  return report;
}

double phi_integral(const DiscreteMeasure& mu) {
  double s = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double y = mu.atoms()[i];
    s += mu.weights()[i] * std::sqrt(1.0 + y * y);
  }
  return s;
}

namespace detail {

Peacock reparametrize_sequence(const std::vector<DiscreteMeasure>& measures, double tol) {
  for (std::size_t i = 0; i + 1 < measures.size(); ++i) {
    if (!convex_order(measures[i], measures[i + 1], tol)) {
      throw std::invalid_argument("reparametrize: convex order fails between entries " +
                                  std::to_string(i) + " and " + std::to_string(i + 1));
    }
  }
  std::vector<double> f;
  std::vector<DiscreteMeasure> kept;
  for (const auto& m : measures) {
    const double v = phi_integral(m);
    // Equal phi-integral along a convex-ordered family means equal measures.
    if (!f.empty() && v - f.back() <= 1e-12 * f.back()) continue;
    f.push_back(v);
    kept.push_back(m);
  }
  if (kept.size() == 1) return Peacock({1.0}, std::move(kept));
  const double lo = f.front();
  const double span = f.back() - lo;
  std::vector<double> times(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) times[i] = (f[i] - lo) / span;
  times.back() = 1.0;
  return Peacock(std::move(times), std::move(kept));
}

}  // namespace detail

DiscreteMeasure interpolate(const Peacock& p, double s) {
  const auto& t = p.times();
  if (!(s >= t.front()) || s > t.back()) {
    throw std::out_of_range("interpolate: time lies outside the peacock's range");
  }
  const auto it = std::lower_bound(t.begin(), t.end(), s);
  const auto b = static_cast<std::size_t>(it - t.begin());
  if (*it == s) return p.measures()[b];
  const std::size_t a = b - 1;
  const double lambda = (s - t[a]) / (t[b] - t[a]);
  const std::vector<DiscreteMeasure> parts{p.measures()[a], p.measures()[b]};
  const std::vector<double> coeffs{1.0 - lambda, lambda};
  return mixture(parts, coeffs);
}

RightContinuityReport right_continuity_report(const Peacock& p, double tol) {
  RightContinuityReport r;
  for (const auto& m : p.measures()) r.phi_integrals.push_back(phi_integral(m));
  r.non_decreasing = true;
  for (std::size_t i = 0; i + 1 < r.phi_integrals.size(); ++i) {
    const double d = r.phi_integrals[i + 1] - r.phi_integrals[i];
    if (d > r.max_jump) {
      r.max_jump = d;
      r.max_jump_index = i;
    }
    if (-d > r.max_decrease) r.max_decrease = -d;
    if (d < -tol) r.non_decreasing = false;
  }
  return r;
}

DiscreteMeasure discretized_gaussian(double m, double var, const GridSpec& grid) {
  if (!(var >= 0.0)) throw std::invalid_argument("gaussian: variance must be nonnegative");
  const double lo = grid.x_min + grid.h;
  const double hi = grid.x_max - grid.h;
  if (m < lo || m > hi) throw std::out_of_range("gaussian: mean lies outside the grid interior");
  if (var == 0.0) return project_to_grid(DiscreteMeasure::dirac(m), grid);
  // Symmetric lattice around the mean keeps the mean exact.
  const double reach = std::min(m - lo, hi - m);
  const auto k_max = static_cast<long>(std::floor(reach / grid.h + 1e-9));
  std::vector<double> xs;
  std::vector<double> ws;
  for (long k = -k_max; k <= k_max; ++k) {
    const double d = static_cast<double>(k) * grid.h;
    xs.push_back(m + d);
    ws.push_back(std::exp(-0.5 * d * d / var));
  }
  return project_to_grid(DiscreteMeasure::from_unnormalized(std::move(xs), std::move(ws)), grid);
}

}  // namespace kellerer
