#include "kellerer/root.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>
#include <string>
#include <thread>

#include "kellerer/rng.hpp"

namespace kellerer {

namespace {

constexpr std::size_t kBlockPaths = 8192;
constexpr double kNegligibleFree = 1e-18;

std::size_t grid_index(const GridSpec& grid, double x, const char* what) {
  const auto i = grid.index_of(x);
  if (!i) {
    throw std::invalid_argument(std::string(what) + ": atom " + std::to_string(x) +
                                " is not a grid point");
  }
  return *i;
}

// One walk from `start`, driven by `stream`; returns the final grid index and
// whether it was absorbed before the horizon.
struct WalkEnd {
  std::size_t index;
  bool absorbed;
};

WalkEnd run_walk(const Barrier& b, std::size_t start, PhiloxStream& stream) {
  const double p = b.grid().move_probability();
  const std::int64_t horizon = b.horizon_steps();
  std::size_t i = start;
  for (std::int64_t n = 0;; ++n) {
    if (b.contains(i, n)) return {i, true};
    if (n == horizon) return {i, false};
    const double u = stream.next_double();
    if (u < p) {
      --i;
    } else if (u < 2.0 * p) {
      ++i;
    }
  }
}

template <typename BlockFn>
auto run_blocks(std::size_t n_paths, BlockFn fn) {
  using Result = decltype(fn(std::size_t{0}, std::size_t{0}));
  std::vector<std::future<Result>> jobs;
  for (std::size_t begin = 0; begin < n_paths; begin += kBlockPaths) {
    const std::size_t end = std::min(n_paths, begin + kBlockPaths);
    const auto policy = std::thread::hardware_concurrency() > 1 ? std::launch::async : std::launch::deferred;
    jobs.push_back(std::async(policy, fn, begin, end));
  }
  std::vector<Result> out;
  out.reserve(jobs.size());
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

}  // namespace

double default_t_max(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  return 4.0 * std::max(0.0, variance(nu) - variance(mu)) + 1.0;
}

Barrier::Barrier(GridSpec grid, std::vector<std::int64_t> entry_step,
                 std::optional<double> walk_horizon)
    : grid_(grid),
      entry_step_(std::move(entry_step)),
      walk_horizon_(walk_horizon.value_or(kWalkHorizonFactor * grid.t_max)) {
  grid_.validate();
  if (!(walk_horizon_ > 0.0) || !std::isfinite(walk_horizon_)) {
    throw std::invalid_argument("barrier: walk horizon must be positive");
  }
  if (entry_step_.size() != grid_.num_points()) {
    throw std::invalid_argument("barrier: need one entry step per grid point");
  }
  // The boundary is absorbing.
  entry_step_.front() = 0;
  entry_step_.back() = 0;
}

double Barrier::entry_time(std::size_t i) const {
  if (entry_step_[i] == kNever) return std::numeric_limits<double>::infinity();
  return static_cast<double>(entry_step_[i]) * grid_.dt;
}

std::int64_t Barrier::horizon_steps() const {
  return static_cast<std::int64_t>(std::ceil(walk_horizon_ / grid_.dt - 1e-9));
}

RootSolution solve_barrier(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                           const GridSpec& grid, const RootOptions& options) {
  grid.validate();
  const std::size_t n = grid.num_points();
  for (double x : mu.atoms()) grid_index(grid, x, "solve_barrier(mu)");
  std::vector<bool> nu_support(n, false);
  double boundary_mass = 0.0;
  for (std::size_t k = 0; k < nu.size(); ++k) {
    const std::size_t i = grid_index(grid, nu.atoms()[k], "solve_barrier(nu)");
    nu_support[i] = true;
    if (i == 0 || i + 1 == n) boundary_mass += nu.weights()[k];
  }
  if (boundary_mass > options.boundary_mass_tol) {
    throw std::invalid_argument("solve_barrier: nu puts mass on the grid boundary; widen the grid");
  }
  if (!convex_order(mu, nu, options.order_tol)) {
    const auto v = worst_call_violation(mu, nu);
    throw std::invalid_argument("solve_barrier: mu is not below nu in convex order (call violation " +
                                std::to_string(v.amount) + " at " + std::to_string(v.strike) + ")");
  }

  std::vector<double> xs(n);
  for (std::size_t i = 0; i < n; ++i) xs[i] = grid.point(i);
  ObstacleSolution sol;
  sol.grid = grid;
  sol.initial = potential_at(mu, xs);
  sol.obstacle = potential_at(nu, xs);
  const auto& obs = sol.obstacle;
  double obs_max = 0.0;
  for (double o : obs) obs_max = std::max(obs_max, std::abs(o));
  const double ctol = options.contact_tol.value_or(1e-10 * (1.0 + obs_max));
  sol.contact_tol = ctol;

  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = std::min(sol.initial[i], obs[i]);
  v.front() = obs.front();
  v.back() = obs.back();

  std::vector<std::int64_t> entry(n, Barrier::kNever);
  auto residual_on_support = [&] {
    double r = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (nu_support[i]) r = std::max(r, obs[i] - v[i]);
    }
    return r;
  };
  auto record_contacts = [&](std::int64_t step) {
    for (std::size_t i = 0; i < n; ++i) {
      const double gap = obs[i] - v[i];
      if (entry[i] == Barrier::kNever) {
        if (gap <= ctol) entry[i] = step;
      } else {
        sol.max_contact_gap = std::max(sol.max_contact_gap, gap - ctol);
      }
    }
  };

  const double ratio = grid.move_probability();
  const auto horizon = static_cast<std::int64_t>(std::ceil(grid.t_max / grid.dt - 1e-9));
  record_contacts(0);
  double residual = residual_on_support();
  std::int64_t step = 0;
  std::vector<double> next(n);
  while (residual > options.stop_tol && step < horizon) {
    next.front() = obs.front();
    next.back() = obs.back();
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double heat = v[i] + ratio * (v[i + 1] - 2.0 * v[i] + v[i - 1]);
      next[i] = std::min(heat, obs[i]);
      sol.max_decrease = std::max(sol.max_decrease, v[i] - next[i]);
    }
    v.swap(next);
    ++step;
    record_contacts(step);
    residual = residual_on_support();
  }
  sol.status = residual <= options.stop_tol ? SolveStatus::Converged : SolveStatus::HorizonReached;
  if (sol.status == SolveStatus::Converged) {
    // Within stop_tol counts as contact at the stopping resolution.
    for (std::size_t i = 0; i < n; ++i) {
      if (nu_support[i] && entry[i] == Barrier::kNever) entry[i] = step;
    }
  }
  sol.residual = residual;
  sol.steps = step;
  sol.final_time = static_cast<double>(step) * grid.dt;
  sol.potential = v;
  return {Barrier(grid, std::move(entry), options.walk_horizon), std::move(sol)};
}

KernelExtraction extract_kernel(std::span<const double> sources, const Barrier& barrier,
                                const RootOptions& options) {
  const auto& grid = barrier.grid();
  const std::size_t n = grid.num_points();
  const double p = grid.move_probability();
  const std::int64_t horizon = barrier.horizon_steps();
  std::vector<double> src;
  std::vector<DiscreteMeasure> targets;
  std::vector<double> leaks;
  std::vector<double> free(n), absorbed(n), next(n);
  for (double x : sources) {
    const std::size_t start = grid_index(grid, x, "extract_kernel");
    std::fill(free.begin(), free.end(), 0.0);
    std::fill(absorbed.begin(), absorbed.end(), 0.0);
    free[start] = 1.0;
    std::size_t lo = start;
    std::size_t hi = start;
    double remaining = 1.0;
    for (std::int64_t step = 0;; ++step) {
      remaining = 0.0;
      for (std::size_t i = lo; i <= hi; ++i) {
        if (barrier.contains(i, step)) {
          absorbed[i] += free[i];
          free[i] = 0.0;
        }
        remaining += free[i];
      }
      if (remaining < kNegligibleFree || step == horizon) break;
      const std::size_t nlo = lo > 0 ? lo - 1 : 0;
      const std::size_t nhi = std::min(n - 1, hi + 1);
      for (std::size_t i = nlo; i <= nhi; ++i) {
        const double left = i > 0 ? free[i - 1] : 0.0;
        const double right = i + 1 < n ? free[i + 1] : 0.0;
        next[i] = (1.0 - 2.0 * p) * free[i] + p * (left + right);
      }
      for (std::size_t i = nlo; i <= nhi; ++i) free[i] = next[i];
      lo = nlo;
      hi = nhi;
    }
    std::vector<double> xs;
    std::vector<double> ws;
    for (std::size_t i = lo; i <= hi; ++i) {
      const double m = absorbed[i] + free[i];
      if (m > 0.0) {
        xs.push_back(grid.point(i));
        ws.push_back(m);
      }
    }
    src.push_back(grid.point(start));
    targets.push_back(DiscreteMeasure::from_unnormalized(std::move(xs), std::move(ws)));
    leaks.push_back(std::max(remaining, 0.0));
  }
  KernelExtraction out{MartingaleKernel(std::move(src), std::move(targets)), std::move(leaks)};
  for (double l : out.unabsorbed) out.max_unabsorbed = std::max(out.max_unabsorbed, l);
  out.leak_ok = out.max_unabsorbed <= options.leak_tol;
  return out;
}

KernelExtraction extract_kernel(const DiscreteMeasure& mu, const Barrier& barrier,
                                const RootOptions& options) {
  return extract_kernel(mu.atoms(), barrier, options);
}

EmbedResult monte_carlo_embed(const DiscreteMeasure& mu, const Barrier& barrier,
                              std::size_t n_paths, std::uint64_t seed) {
  if (n_paths == 0) throw std::invalid_argument("monte_carlo_embed: need at least one path");
  const auto& grid = barrier.grid();
  std::vector<std::size_t> start_index;
  std::vector<double> cumulative;
  double cum = 0.0;
  for (std::size_t k = 0; k < mu.size(); ++k) {
    start_index.push_back(grid_index(grid, mu.atoms()[k], "monte_carlo_embed"));
    cum += mu.weights()[k];
    cumulative.push_back(cum);
  }
  struct Block {
    std::vector<std::size_t> counts;
    std::size_t truncated = 0;
  };
  const std::size_t n = grid.num_points();
  auto block = [&](std::size_t begin, std::size_t end) {
    Block b{std::vector<std::size_t>(n, 0), 0};
    for (std::size_t path = begin; path < end; ++path) {
      PhiloxStream stream(seed, path);
      const double u = stream.next_double() * cumulative.back();
      auto k = static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), u) -
                                        cumulative.begin());
      k = std::min(k, start_index.size() - 1);
      const WalkEnd e = run_walk(barrier, start_index[k], stream);
      ++b.counts[e.index];
      if (!e.absorbed) ++b.truncated;
    }
    return b;
  };
  std::vector<std::size_t> counts(n, 0);
  std::size_t truncated = 0;
  for (const auto& b : run_blocks(n_paths, block)) {
    for (std::size_t i = 0; i < n; ++i) counts[i] += b.counts[i];
    truncated += b.truncated;
  }
  std::vector<double> xs;
  std::vector<double> ws;
  for (std::size_t i = 0; i < n; ++i) {
    if (counts[i] == 0) continue;
    xs.push_back(grid.point(i));
    ws.push_back(static_cast<double>(counts[i]));
  }
  return {DiscreteMeasure::from_unnormalized(std::move(xs), std::move(ws)), truncated};
}

IsotoneCheck isotone_hitting_check(const Barrier& barrier, double x, double x_prime,
                                   std::size_t n_paths, std::uint64_t seed) {
  const auto& grid = barrier.grid();
  const std::size_t lo = grid_index(grid, x, "isotone_hitting_check");
  const std::size_t hi = grid_index(grid, x_prime, "isotone_hitting_check");
  if (lo > hi) throw std::invalid_argument("isotone_hitting_check: need x <= x'");
  const double p = grid.move_probability();
  const std::int64_t horizon = barrier.horizon_steps();
  auto block = [&](std::size_t begin, std::size_t end) {
    std::size_t violations = 0;
    for (std::size_t path = begin; path < end; ++path) {
      PhiloxStream stream(seed, path);
      std::size_t a = lo;
      std::size_t b = hi;
      bool a_done = false;
      bool b_done = false;
      for (std::int64_t step = 0;; ++step) {
        a_done = a_done || barrier.contains(a, step);
        b_done = b_done || barrier.contains(b, step);
        if ((a_done && b_done) || step == horizon) break;
        // Both walkers consume the same increment.
        const double u = stream.next_double();
        const int move = u < p ? -1 : (u < 2.0 * p ? 1 : 0);
        if (!a_done) a = static_cast<std::size_t>(static_cast<std::int64_t>(a) + move);
        if (!b_done) b = static_cast<std::size_t>(static_cast<std::int64_t>(b) + move);
      }
      if (a > b) ++violations;
    }
    return violations;
  };
  IsotoneCheck c;
  c.paths = n_paths;
  for (std::size_t v : run_blocks(n_paths, block)) c.violations += v;
  c.holds = c.violations == 0;
  return c;
}

}  // namespace kellerer
