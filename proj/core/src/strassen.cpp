#include "kellerer/strassen.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace kellerer {

namespace {

constexpr double kKernelTolerance = 1e-8;

std::string describe_violation(double mean_gap, const CallViolation& v) {
  std::ostringstream os;
  os.precision(12);
  if (mean_gap > Tolerances{}.mean) {
    os << "means differ by " << mean_gap;
  } else {
    os << "call price of mu exceeds that of nu by " << v.amount << " at strike " << v.strike;
  }
  return os.str();
}

struct Solved {
  LpSolution lp;
  std::optional<MartingaleKernel> kernel;
  double martingale_error = 0.0;
};

Solved solve_martingale(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                        const CostFunction& cost, std::size_t cap) {
  if (mu.size() * nu.size() > cap) {
    throw std::length_error("coupling: support product exceeds the configured cap");
  }
  const auto problem = TransportLP::between(mu, nu, cost);
  Solved s;
  s.lp = solve_lp(problem.to_lp(true));
  if (s.lp.status != LpStatus::Optimal) return s;
  const std::size_t cols = nu.size();
  std::vector<DiscreteMeasure> targets;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    std::vector<double> xs(nu.atoms().begin(), nu.atoms().end());
    std::vector<double> ws(s.lp.x.begin() + static_cast<std::ptrdiff_t>(i * cols),
                           s.lp.x.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols));
    targets.push_back(DiscreteMeasure::from_unnormalized(std::move(xs), std::move(ws)));
  }
  MartingaleKernel k(std::vector<double>(mu.atoms().begin(), mu.atoms().end()), std::move(targets));
  s.martingale_error = validate_kernel(k).max_deviation;
  s.kernel = std::move(k);
  return s;
}

}  // namespace

TransportLP TransportLP::between(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                 const CostFunction& cost) {
  TransportLP t;
  t.row_marginal.assign(mu.weights().begin(), mu.weights().end());
  t.column_marginal.assign(nu.weights().begin(), nu.weights().end());
  t.sources.assign(mu.atoms().begin(), mu.atoms().end());
  t.targets.assign(nu.atoms().begin(), nu.atoms().end());
  if (cost) {
    std::vector<double> c;
    c.reserve(mu.size() * nu.size());
    for (double x : t.sources) {
      for (double y : t.targets) c.push_back(cost(x, y));
    }
    t.cost = std::move(c);
  }
  return t;
}

LinearProgram TransportLP::to_lp(bool martingale) const {
  const std::size_t n = row_marginal.size();
  const std::size_t m = column_marginal.size();
  if (sources.size() != n || targets.size() != m || (cost && cost->size() != n * m)) {
    throw std::invalid_argument("transport: inconsistent dimensions");
  }
  LinearProgram lp(n + m + (martingale ? n : 0), n * m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t v = i * m + j;
      lp.at(i, v) = 1.0;
      lp.at(n + j, v) = 1.0;
      if (martingale) lp.at(n + m + i, v) = targets[j] - sources[i];
    }
    lp.b[i] = row_marginal[i];
  }
  for (std::size_t j = 0; j < m; ++j) lp.b[n + j] = column_marginal[j];
  if (cost) lp.c = *cost;
  return lp;
}

CouplingResult feasible_coupling(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                 std::size_t cap) {
  CouplingResult r;
  r.mean_gap = std::abs(mean(mu) - mean(nu));
  r.violation = worst_call_violation(mu, nu);
  const Solved s = solve_martingale(mu, nu, nullptr, cap);
  switch (s.lp.status) {
    case LpStatus::Infeasible:
      r.status = CouplingStatus::Infeasible;
      r.certificate = describe_violation(r.mean_gap, r.violation);
      return r;
    case LpStatus::Optimal:
      break;
    default:
      r.status = CouplingStatus::NumericalFailure;
      r.certificate = "simplex did not terminate normally";
      return r;
  }
  r.martingale_error = s.martingale_error;
  if (s.martingale_error > kKernelTolerance) {
    r.status = CouplingStatus::NumericalFailure;
    r.certificate = "extracted kernel violates the martingale constraint";
    return r;
  }
  r.status = CouplingStatus::Feasible;
  r.kernel = s.kernel;
  return r;
}

MartingaleKernel min_cost_coupling(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                   const CostFunction& cost, std::size_t cap) {
  Solved s = solve_martingale(mu, nu, cost ? cost : CostFunction([](double, double) { return 0.0; }), cap);
  if (s.lp.status == LpStatus::Infeasible) {
    throw std::invalid_argument("min_cost_coupling: no martingale coupling exists (" +
                                describe_violation(std::abs(mean(mu) - mean(nu)),
                                                   worst_call_violation(mu, nu)) +
                                ")");
  }
  if (s.lp.status != LpStatus::Optimal || s.martingale_error > kKernelTolerance) {
    throw std::runtime_error("min_cost_coupling: numerical failure in the simplex");
  }
  return std::move(*s.kernel);
}

double min_cost_transport(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                          const CostFunction& cost) {
  const auto lp = TransportLP::between(mu, nu, cost).to_lp(false);
  const auto sol = solve_lp(lp);
  if (sol.status != LpStatus::Optimal) {
    throw std::runtime_error("min_cost_transport: simplex failed");
  }
  return sol.objective;
}

}  // namespace kellerer
