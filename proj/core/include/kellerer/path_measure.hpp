#pragma once

// Finitely supported laws of real-valued processes on a finite time grid.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "kellerer/kernels.hpp"
#include "kellerer/measures.hpp"

namespace kellerer {

using Path = std::vector<double>;

/// Weighted set of paths, one coordinate per time. Duplicate paths are
/// merged at construction; weights must sum to one within 1e-12.
class PathMeasure {
 public:
  PathMeasure(std::vector<double> times, std::vector<Path> paths, std::vector<double> weights);

  const std::vector<double>& times() const { return times_; }
  const std::vector<Path>& paths() const { return paths_; }
  const std::vector<double>& weights() const { return weights_; }
  std::size_t size() const { return paths_.size(); }
  /// Position of t in times(); throws std::out_of_range if absent.
  std::size_t time_index(double t) const;

 private:
  std::vector<double> times_;
  std::vector<Path> paths_;
  std::vector<double> weights_;
};

inline constexpr std::size_t kDefaultPathCap = 1'000'000;

/// Joint law of (S_0, ..., S_n) for S_0 ~ mu0 and S_{k+1} ~ chain[k](S_k, .).
PathMeasure chain_to_path_measure(const DiscreteMeasure& mu0,
                                  const std::vector<MartingaleKernel>& chain,
                                  std::vector<double> times,
                                  std::size_t cap = kDefaultPathCap);

DiscreteMeasure marginal(const PathMeasure& p, double t);

bool is_martingale(const PathMeasure& p, double tol = Tolerances{}.mean);

/// Compares, for every history, the conditional law of the whole future
/// with the conditional law given only the present value (total variation).
bool is_markov(const PathMeasure& p, double tol = Tolerances{}.order);

/// Largest total-variation gap found by is_markov.
double markov_defect(const PathMeasure& p);

/// Three-step example of Markov laws converging to a non-Markov law:
/// 1/2 (delta_(1, 1/n, 1) + delta_(-1, -1/n, -1)) on times (1, 2, 3);
/// std::nullopt gives the limit with middle coordinate 0.
PathMeasure counterexample(std::optional<unsigned> n);

/// Bounded nonnegative functional of the history up to a time s:
/// scale * prod_k 1{S_{q_k} <= c_k} (or > c_k when `above`).
struct HistoryFunctional {
  struct Factor {
    double time = 0.0;
    double threshold = 0.0;
    bool above = false;
  };
  double scale = 1.0;
  std::vector<Factor> factors;

  double operator()(const PathMeasure& p, const Path& path) const;
  /// Latest time the functional looks at.
  std::optional<double> horizon() const;
};

struct LqCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

/// E[X f(S_t)] E[Y] - E[X] E[Y f(S_t)]  <=  E_{P x P}[X(w) Y(w') |w_s - w'_s|].
/// X and Y may only look at times <= s.
LqCheck lq_inequality_check(const PathMeasure& p, double s, double t, const Lip1TestFunction& f,
                            const HistoryFunctional& x, const HistoryFunctional& y,
                            double tol = Tolerances{}.order);

/// Single threshold indicators 1{S_q <= c} and complements for every time
/// q <= s and every attained value c, plus the constant 1.
std::vector<HistoryFunctional> threshold_functionals(const PathMeasure& p, double s);

/// Number of completed upcrossings of [a, b].
int path_upcrossings(std::span<const double> path, double a, double b);

}  // namespace kellerer
