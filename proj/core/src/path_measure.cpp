#include "kellerer/path_measure.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace kellerer {

namespace {

constexpr double kNegligibleMass = 1e-15;

using FutureLaw = std::map<Path, double>;

Path slice(const Path& p, std::size_t from, std::size_t to) {
  return Path(p.begin() + static_cast<std::ptrdiff_t>(from), p.begin() + static_cast<std::ptrdiff_t>(to));
}

double total_variation(const FutureLaw& a, double mass_a, const FutureLaw& b, double mass_b) {
  double tv = 0.0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
      tv += ia->second / mass_a;
      ++ia;
    } else if (ia == a.end() || ib->first < ia->first) {
      tv += ib->second / mass_b;
      ++ib;
    } else {
      tv += std::abs(ia->second / mass_a - ib->second / mass_b);
      ++ia;
      ++ib;
    }
  }
  return 0.5 * tv;
}

}  // namespace

PathMeasure::PathMeasure(std::vector<double> times, std::vector<Path> paths,
                         std::vector<double> weights)
    : times_(std::move(times)) {
  if (times_.empty()) throw std::invalid_argument("path measure: no times");
  for (std::size_t i = 0; i + 1 < times_.size(); ++i) {
    if (!(times_[i] < times_[i + 1])) {
      throw std::invalid_argument("path measure: times must be strictly increasing");
    }
  }
  if (paths.size() != weights.size() || paths.empty()) {
    throw std::invalid_argument("path measure: need one weight per path");
  }
  std::map<Path, double> merged;
  double total = 0.0;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    if (paths[i].size() != times_.size()) {
      throw std::invalid_argument("path measure: path length differs from number of times");
    }
    if (!(weights[i] >= 0.0)) throw std::invalid_argument("path measure: negative weight");
    merged[paths[i]] += weights[i];
    total += weights[i];
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("path measure: weights must sum to 1");
  }
  for (auto& [path, w] : merged) {
    if (w <= 0.0) continue;
    paths_.push_back(path);
    weights_.push_back(w / total);
  }
}

std::size_t PathMeasure::time_index(double t) const {
  const auto it = std::find(times_.begin(), times_.end(), t);
  if (it == times_.end()) throw std::out_of_range("path measure: unknown time");
  return static_cast<std::size_t>(it - times_.begin());
}

PathMeasure chain_to_path_measure(const DiscreteMeasure& mu0, const std::vector<MartingaleKernel>& chain,
                                  std::vector<double> times, std::size_t cap) {
  if (times.size() != chain.size() + 1) {
    throw std::invalid_argument("chain: need one more time than kernels");
  }
  std::vector<Path> paths;
  std::vector<double> weights;
  for (std::size_t i = 0; i < mu0.size(); ++i) {
    paths.push_back({mu0.atoms()[i]});
    weights.push_back(mu0.weights()[i]);
  }
  for (std::size_t k = 0; k < chain.size(); ++k) {
    std::vector<Path> next_paths;
    std::vector<double> next_weights;
    for (std::size_t i = 0; i < paths.size(); ++i) {
      const std::size_t src = chain[k].find_source(paths[i].back());
      if (src == chain[k].size()) {
        throw std::invalid_argument("chain: kernel " + std::to_string(k) +
                                    " has no source at " + std::to_string(paths[i].back()));
      }
      const auto& target = chain[k].targets()[src];
      for (std::size_t j = 0; j < target.size(); ++j) {
        if (next_paths.size() >= cap) throw std::length_error("chain: path cap exceeded");
        Path p = paths[i];
        p.push_back(target.atoms()[j]);
        next_paths.push_back(std::move(p));
        next_weights.push_back(weights[i] * target.weights()[j]);
      }
    }
    paths = std::move(next_paths);
    weights = std::move(next_weights);
  }
  // Products of normalized weights can drift from 1 in the last bits.
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  for (double& w : weights) w /= total;
  return PathMeasure(std::move(times), std::move(paths), std::move(weights));
}

DiscreteMeasure marginal(const PathMeasure& p, double t) {
  const std::size_t k = p.time_index(t);
  std::vector<double> xs;
  xs.reserve(p.size());
  for (const auto& path : p.paths()) xs.push_back(path[k]);
  return DiscreteMeasure::from_unnormalized(std::move(xs), p.weights());
}

bool is_martingale(const PathMeasure& p, double tol) {
  const std::size_t n = p.times().size();
  for (std::size_t k = 0; k + 1 < n; ++k) {
    std::map<Path, std::pair<double, double>> groups;  // prefix -> (mass, mass * next)
    for (std::size_t i = 0; i < p.size(); ++i) {
      auto& g = groups[slice(p.paths()[i], 0, k + 1)];
      g.first += p.weights()[i];
      g.second += p.weights()[i] * p.paths()[i][k + 1];
    }
    for (const auto& [prefix, g] : groups) {
      if (g.first < kNegligibleMass) continue;
      if (std::abs(g.second / g.first - prefix.back()) > tol) return false;
    }
  }
  return true;
}

double markov_defect(const PathMeasure& p) {
  const std::size_t n = p.times().size();
  double worst = 0.0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    std::map<Path, std::pair<double, FutureLaw>> by_history;
    std::map<double, std::pair<double, FutureLaw>> by_present;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const auto& path = p.paths()[i];
      const double w = p.weights()[i];
      const Path future = slice(path, k + 1, n);
      auto& h = by_history[slice(path, 0, k + 1)];
      h.first += w;
      h.second[future] += w;
      auto& v = by_present[path[k]];
      v.first += w;
      v.second[future] += w;
    }
    for (const auto& [history, h] : by_history) {
      if (h.first < kNegligibleMass) continue;
      const auto& v = by_present.at(history.back());
      worst = std::max(worst, total_variation(h.second, h.first, v.second, v.first));
    }
  }
  return worst;
}

bool is_markov(const PathMeasure& p, double tol) { return markov_defect(p) <= tol; }

PathMeasure counterexample(std::optional<unsigned> n) {
  if (n && *n == 0) throw std::invalid_argument("counterexample: n must be positive");
  const double mid = n ? 1.0 / static_cast<double>(*n) : 0.0;
  return PathMeasure({1.0, 2.0, 3.0}, {{1.0, mid, 1.0}, {-1.0, -mid, -1.0}}, {0.5, 0.5});
}

double HistoryFunctional::operator()(const PathMeasure& p, const Path& path) const {
  double v = scale;
  for (const auto& f : factors) {
    const double x = path[p.time_index(f.time)];
    const bool below = x <= f.threshold;
    if (below == f.above) return 0.0;
  }
  return v;
}

std::optional<double> HistoryFunctional::horizon() const {
  std::optional<double> h;
  for (const auto& f : factors) h = h ? std::max(*h, f.time) : f.time;
  return h;
}

LqCheck lq_inequality_check(const PathMeasure& p, double s, double t, const Lip1TestFunction& f,
                            const HistoryFunctional& x, const HistoryFunctional& y, double tol) {
  const std::size_t si = p.time_index(s);
  const std::size_t ti = p.time_index(t);
  if (!(si < ti)) throw std::invalid_argument("lq check: need s < t");
  for (const auto* fn : {&x, &y}) {
    if (fn->scale < 0.0) throw std::invalid_argument("lq check: functional must be nonnegative");
    if (auto hz = fn->horizon(); hz && *hz > s) {
      throw std::invalid_argument("lq check: functional looks beyond time s");
    }
  }
  std::vector<double> xv(p.size());
  std::vector<double> yv(p.size());
  double ex = 0.0, ey = 0.0, exf = 0.0, eyf = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto& path = p.paths()[i];
    const double w = p.weights()[i];
    xv[i] = x(p, path);
    yv[i] = y(p, path);
    const double ft = f(path[ti]);
    ex += w * xv[i];
    ey += w * yv[i];
    exf += w * xv[i] * ft;
    eyf += w * yv[i] * ft;
  }
  double rhs = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (xv[i] == 0.0) continue;
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (yv[j] == 0.0) continue;
      rhs += p.weights()[i] * p.weights()[j] * xv[i] * yv[j] *
             std::abs(p.paths()[i][si] - p.paths()[j][si]);
    }
  }
  LqCheck c;
  c.lhs = exf * ey - ex * eyf;
  c.rhs = rhs;
  c.holds = c.lhs <= c.rhs + tol;
  return c;
}

std::vector<HistoryFunctional> threshold_functionals(const PathMeasure& p, double s) {
  const std::size_t si = p.time_index(s);
  std::vector<HistoryFunctional> out{HistoryFunctional{}};
  for (std::size_t q = 0; q <= si; ++q) {
    std::vector<double> values;
    for (const auto& path : p.paths()) values.push_back(path[q]);
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    for (double c : values) {
      out.push_back({1.0, {{p.times()[q], c, false}}});
      out.push_back({1.0, {{p.times()[q], c, true}}});
    }
  }
  return out;
}

int path_upcrossings(std::span<const double> path, double a, double b) {
  if (!(a < b)) throw std::invalid_argument("upcrossings: need a < b");
  int count = 0;
  bool armed = false;
  for (double x : path) {
    if (!armed && x <= a) {
      armed = true;
    } else if (armed && x >= b) {
      ++count;
      armed = false;
    }
  }
  return count;
}

}  // namespace kellerer
