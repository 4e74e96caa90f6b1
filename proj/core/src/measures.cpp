#include "kellerer/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace kellerer {

namespace {

bool same_atom(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

// Sorts, merges duplicates and drops dust.
void canonicalize(std::vector<double>& atoms, std::vector<double>& weights) {
  if (atoms.size() != weights.size()) {
    throw std::invalid_argument("measure: atoms and weights differ in length");
  }
  std::vector<std::size_t> order(atoms.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return atoms[a] < atoms[b]; });
  std::vector<double> xs;
  std::vector<double> ws;
  xs.reserve(atoms.size());
  ws.reserve(atoms.size());
  for (std::size_t k : order) {
    const double x = atoms[k];
    const double w = weights[k];
    if (!std::isfinite(x) || !std::isfinite(w)) {
      throw std::invalid_argument("measure: non-finite atom or weight");
    }
    if (w < 0.0) throw std::invalid_argument("measure: negative weight");
    if (!xs.empty() && same_atom(xs.back(), x)) {
      ws.back() += w;
    } else {
      xs.push_back(x);
      ws.push_back(w);
    }
  }
  std::size_t out = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (ws[k] < DiscreteMeasure::kDropWeight) continue;
    xs[out] = xs[k];
    ws[out] = ws[k];
    ++out;
  }
  xs.resize(out);
  ws.resize(out);
  atoms = std::move(xs);
  weights = std::move(ws);
}

// Call prices at an ascending list of strikes in one sweep.
std::vector<double> call_prices_sorted(const DiscreteMeasure& mu,
                                       std::span<const double> strikes) {
  const auto xs = mu.atoms();
  const auto ws = mu.weights();
  // Suffix sums of mass and first moment.
  std::vector<double> tail_mass(xs.size() + 1, 0.0);
  std::vector<double> tail_moment(xs.size() + 1, 0.0);
  for (std::size_t k = xs.size(); k-- > 0;) {
    tail_mass[k] = tail_mass[k + 1] + ws[k];
    tail_moment[k] = tail_moment[k + 1] + ws[k] * xs[k];
  }
  std::vector<double> out(strikes.size());
  std::size_t j = 0;
  for (std::size_t i = 0; i < strikes.size(); ++i) {
    const double k = strikes[i];
    while (j < xs.size() && xs[j] <= k) ++j;
    out[i] = std::max(0.0, tail_moment[j] - k * tail_mass[j]);
  }
  return out;
}

}  // namespace

DiscreteMeasure::DiscreteMeasure(std::vector<double> atoms,
                                 std::vector<double> weights) {
  canonicalize(atoms, weights);
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (atoms.empty() || std::abs(total - 1.0) > kConstructionMassTolerance) {
    throw std::invalid_argument("measure: weights must sum to 1 (got " +
                                std::to_string(total) + ")");
  }
  for (double& w : weights) w /= total;
  atoms_ = std::move(atoms);
  weights_ = std::move(weights);
}

DiscreteMeasure DiscreteMeasure::dirac(double x) { return DiscreteMeasure({x}, {1.0}); }

DiscreteMeasure DiscreteMeasure::uniform(std::vector<double> points) {
  if (points.empty()) throw std::invalid_argument("measure: no points");
  std::vector<double> w(points.size(), 1.0 / static_cast<double>(points.size()));
  return from_unnormalized(std::move(points), std::move(w));
}

DiscreteMeasure DiscreteMeasure::from_unnormalized(std::vector<double> atoms,
                                                   std::vector<double> masses) {
  if (atoms.size() != masses.size()) {
    throw std::invalid_argument("measure: atoms and weights differ in length");
  }
  const double total = std::accumulate(masses.begin(), masses.end(), 0.0);
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw std::invalid_argument("measure: total mass must be positive");
  }
  for (double& m : masses) m /= total;
  // Renormalize once more after dust removal.
  canonicalize(atoms, masses);
  if (atoms.empty()) throw std::invalid_argument("measure: all mass dropped");
  const double kept = std::accumulate(masses.begin(), masses.end(), 0.0);
  for (double& m : masses) m /= kept;
  DiscreteMeasure out;
  out.atoms_ = std::move(atoms);
  out.weights_ = std::move(masses);
  return out;
}

double mean(const DiscreteMeasure& mu) {
  double m = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) m += mu.weights()[i] * mu.atoms()[i];
  return m;
}

double variance(const DiscreteMeasure& mu) {
  const double m = mean(mu);
  double v = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double d = mu.atoms()[i] - m;
    v += mu.weights()[i] * d * d;
  }
  return v;
}

double cdf(const DiscreteMeasure& mu, double x) {
  const auto xs = mu.atoms();
  const auto end = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin());
  if (end == xs.size()) return 1.0;
  double f = 0.0;
  for (std::size_t i = 0; i < end; ++i) f += mu.weights()[i];
  return std::min(f, 1.0);
}

double quantile(const DiscreteMeasure& mu, double p) {
  if (!(p > 0.0) || p > 1.0) {
    throw std::domain_error("quantile: level must lie in (0, 1]");
  }
  double cum = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    cum += mu.weights()[i];
    if (cum >= p) return mu.atoms()[i];
  }
  return mu.max_atom();
}

double potential(const DiscreteMeasure& mu, double x) {
  double p = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) p += mu.weights()[i] * std::abs(x - mu.atoms()[i]);
  return p;
}

double call_price(const DiscreteMeasure& mu, double strike) {
  double c = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    c += mu.weights()[i] * std::max(mu.atoms()[i] - strike, 0.0);
  }
  return c;
}

std::vector<double> union_atoms(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  std::vector<double> z;
  z.reserve(a.size() + b.size());
  std::merge(a.atoms().begin(), a.atoms().end(), b.atoms().begin(), b.atoms().end(),
             std::back_inserter(z));
  z.erase(std::unique(z.begin(), z.end()), z.end());
  return z;
}

double w1(const DiscreteMeasure& alpha, const DiscreteMeasure& beta) {
  const auto z = union_atoms(alpha, beta);
  double fa = 0.0;
  double fb = 0.0;
  std::size_t ia = 0;
  std::size_t ib = 0;
  double dist = 0.0;
  for (std::size_t j = 0; j + 1 < z.size(); ++j) {
    while (ia < alpha.size() && alpha.atoms()[ia] <= z[j]) fa += alpha.weights()[ia++];
    while (ib < beta.size() && beta.atoms()[ib] <= z[j]) fb += beta.weights()[ib++];
    dist += std::abs(fa - fb) * (z[j + 1] - z[j]);
  }
  return dist;
}

CallViolation worst_call_violation(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  const auto z = union_atoms(mu, nu);
  const auto cm = call_prices_sorted(mu, z);
  const auto cn = call_prices_sorted(nu, z);
  CallViolation worst{cm[0] - cn[0], z[0]};
  for (std::size_t k = 1; k < z.size(); ++k) {
    if (cm[k] - cn[k] > worst.amount) worst = {cm[k] - cn[k], z[k]};
  }
  return worst;
}

bool convex_order(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double tol) {
  if (std::abs(mean(mu) - mean(nu)) > tol) return false;
  return worst_call_violation(mu, nu).amount <= tol;
}

bool fsd(const DiscreteMeasure& alpha, const DiscreteMeasure& beta, double tol) {
  const auto z = union_atoms(alpha, beta);
  double fa = 0.0;
  double fb = 0.0;
  std::size_t ia = 0;
  std::size_t ib = 0;
  for (double x : z) {
    while (ia < alpha.size() && alpha.atoms()[ia] <= x) fa += alpha.weights()[ia++];
    while (ib < beta.size() && beta.atoms()[ib] <= x) fb += beta.weights()[ib++];
    if (fa < fb - tol) return false;
  }
  return true;
}

DiscreteMeasure mixture(std::span<const DiscreteMeasure> parts, std::span<const double> coeffs) {
  if (parts.size() != coeffs.size() || parts.empty()) {
    throw std::invalid_argument("mixture: need one coefficient per component");
  }
  std::vector<double> xs;
  std::vector<double> ws;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (coeffs[k] < 0.0) throw std::invalid_argument("mixture: negative coefficient");
    for (std::size_t i = 0; i < parts[k].size(); ++i) {
      xs.push_back(parts[k].atoms()[i]);
      ws.push_back(coeffs[k] * parts[k].weights()[i]);
    }
  }
  return DiscreteMeasure(std::move(xs), std::move(ws));
}

DiscreteMeasure project_to_grid(const DiscreteMeasure& mu, const GridSpec& grid) {
  const std::size_t n = grid.num_points();
  std::vector<double> xs;
  std::vector<double> ws;
  for (std::size_t k = 0; k < mu.size(); ++k) {
    const double x = mu.atoms()[k];
    const double w = mu.weights()[k];
    if (auto idx = grid.index_of(x)) {
      xs.push_back(grid.point(*idx));
      ws.push_back(w);
      continue;
    }
    if (x < grid.x_min || x > grid.x_max) {
      throw std::out_of_range("project_to_grid: atom " + std::to_string(x) +
                              " lies outside the grid");
    }
    auto i = static_cast<std::size_t>(std::floor((x - grid.x_min) / grid.h));
    i = std::min(i, n - 2);
    const double lo = grid.point(i);
    const double hi = grid.point(i + 1);
    const double lambda = (x - lo) / (hi - lo);
    xs.push_back(lo);
    ws.push_back((1.0 - lambda) * w);
    xs.push_back(hi);
    ws.push_back(lambda * w);
  }
  return DiscreteMeasure(std::move(xs), std::move(ws));
}

std::vector<double> potential_at(const DiscreteMeasure& mu, std::span<const double> points) {
  std::vector<double> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) out[i] = potential(mu, points[i]);
  return out;
}

}  // namespace kellerer
