#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "kellerer/kernels.hpp"
#include "kellerer/measures.hpp"
#include "kellerer/peacock.hpp"
#include "kellerer/root.hpp"
#include "kellerer/strassen.hpp"

using namespace kellerer;

namespace {

DiscreteMeasure random_lattice_measure(std::mt19937_64& rng, std::size_t n) {
  std::vector<double> xs;
  std::vector<double> ws;
  std::uniform_real_distribution<double> u(0.1, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    xs.push_back(static_cast<double>(i) * 0.5 - static_cast<double>(n) * 0.25);
    ws.push_back(u(rng));
  }
  return DiscreteMeasure::from_unnormalized(std::move(xs), std::move(ws));
}

GridSpec grid(double h) { return GridSpec{-8.0, 8.0, h, h * h / 3.0, 1.0}; }

}  // namespace

static void BM_W1(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_lattice_measure(rng, n);
  const auto b = random_lattice_measure(rng, n);
  for (auto _ : state) benchmark::DoNotOptimize(w1(a, b));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_W1)->RangeMultiplier(4)->Range(8, 4096)->Complexity();

static void BM_ConvexOrder(benchmark::State& state) {
  const auto g = grid(16.0 / static_cast<double>(state.range(0)));
  const auto mu = discretized_gaussian(0.0, 1.0, g);
  const auto nu = discretized_gaussian(0.0, 2.0, g);
  for (auto _ : state) benchmark::DoNotOptimize(convex_order(mu, nu));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ConvexOrder)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

static void BM_FeasibleCoupling(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> xs;
  for (std::size_t i = 0; i < n; ++i) xs.push_back(static_cast<double>(i) - static_cast<double>(n - 1) / 2.0);
  const auto mu = DiscreteMeasure::from_unnormalized(xs, std::vector<double>(n, 1.0));
  const auto nu = DiscreteMeasure::from_unnormalized({xs.front() - 1.0, 0.0, xs.back() + 1.0}, {1.0, 1.0, 1.0});
  for (auto _ : state) benchmark::DoNotOptimize(feasible_coupling(mu, nu));
}
BENCHMARK(BM_FeasibleCoupling)->DenseRange(2, 6, 2);

static void BM_SolveBarrier(benchmark::State& state) {
  const double h = 0.8 / static_cast<double>(state.range(0));
  auto g = grid(h);
  const auto mu = discretized_gaussian(0.0, 1.0, g);
  const auto nu = discretized_gaussian(0.0, 2.0, g);
  g.t_max = default_t_max(mu, nu);
  for (auto _ : state) benchmark::DoNotOptimize(solve_barrier(mu, nu, g));
}
BENCHMARK(BM_SolveBarrier)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_ExtractKernel(benchmark::State& state) {
  const double h = 0.8 / static_cast<double>(state.range(0));
  auto g = grid(h);
  const auto mu = discretized_gaussian(0.0, 1.0, g);
  const auto nu = discretized_gaussian(0.0, 2.0, g);
  g.t_max = default_t_max(mu, nu);
  const auto sol = solve_barrier(mu, nu, g);
  for (auto _ : state) benchmark::DoNotOptimize(extract_kernel(mu, sol.barrier));
}
BENCHMARK(BM_ExtractKernel)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_MonteCarloEmbed(benchmark::State& state) {
  auto g = grid(0.05);
  const auto mu = discretized_gaussian(0.0, 1.0, g);
  const auto nu = discretized_gaussian(0.0, 2.0, g);
  g.t_max = default_t_max(mu, nu);
  const auto sol = solve_barrier(mu, nu, g);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(monte_carlo_embed(mu, sol.barrier, n, 3));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MonteCarloEmbed)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
