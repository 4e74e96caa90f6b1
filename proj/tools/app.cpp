#include "app.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "kellerer/grid.hpp"
#include "kellerer/kernels.hpp"
#include "kellerer/path_measure.hpp"
#include "kellerer/peacock.hpp"
#include "kellerer/rng.hpp"
#include "kellerer/root.hpp"

#ifndef KELLERER_VERSION
#define KELLERER_VERSION "unknown"
#endif

namespace kellerer::app {

namespace {

constexpr double kDefaultH = 0.05;
constexpr std::size_t kDriftBuckets = 10;

std::string read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string hex64(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

Json opt(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

void write_manifest(const RunConfig& c, const std::string& input_bytes) {
  Json m{{"tool", "kellerer"},
         {"version", KELLERER_VERSION},
         {"compiler", __VERSION__},
         {"json_library",
          std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." + std::to_string(NLOHMANN_JSON_VERSION_MINOR) +
              "." + std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
         {"command", c.command},
         {"config", config_json(c)},
         {"seed", c.seed ? Json(*c.seed) : Json(nullptr)},
         {"input_hash", "fnv1a64:" + hex64(fnv1a64(input_bytes))}};
  write_json_file(c.out / "manifest.json", m);
}

RootOptions root_options(const RunConfig& c) {
  RootOptions o;
  o.contact_tol = c.tol.contact;
  o.stop_tol = c.tol.stop;
  o.leak_tol = c.tol.leak;
  o.order_tol = c.tol.order;
  o.walk_horizon = c.walk_horizon;
  return o;
}

/// Lattice of step h covering every atom, two cells wider on each side.
GridSpec covering_grid(const std::vector<DiscreteMeasure>& ms, double h) {
  double lo = ms.front().min_atom();
  double hi = ms.front().max_atom();
  for (const auto& m : ms) {
    lo = std::min(lo, m.min_atom());
    hi = std::max(hi, m.max_atom());
  }
  const double k_lo = std::floor(lo / h + 1e-9) - 2.0;
  const double k_hi = std::ceil(hi / h - 1e-9) + 2.0;
  GridSpec g;
  g.h = h;
  g.x_min = k_lo * h;
  g.x_max = k_hi * h;
  return g;
}

/// Space grid from the input's "grid" entry when present and --h is not
/// given, otherwise a covering lattice.
GridSpec space_grid(const Json& raw, const std::vector<DiscreteMeasure>& ms, const RunConfig& c) {
  GridSpec g;
  if (raw.is_object() && raw.contains("grid") && !c.h) {
    g = grid_from_json(raw.at("grid"));
  } else {
    g = covering_grid(ms, c.h.value_or(kDefaultH));
  }
  g.dt = c.dt.value_or(g.h * g.h / 3.0);
  g.t_max = 1.0;
  return g;
}

GridSpec pair_grid(const GridSpec& space, const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                   const RunConfig& c) {
  GridSpec g = space;
  g.t_max = c.t_max.value_or(default_t_max(mu, nu));
  g.validate();
  return g;
}

std::vector<double> union_points(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  return union_atoms(a, b);
}

/// Cumulative weights for inverse-CDF sampling.
std::vector<double> cumulative(const DiscreteMeasure& m) {
  std::vector<double> c(m.size());
  std::partial_sum(m.weights().begin(), m.weights().end(), c.begin());
  return c;
}

std::size_t draw(const std::vector<double>& cum, double u) {
  const auto it = std::upper_bound(cum.begin(), cum.end(), u * cum.back());
  return std::min<std::size_t>(static_cast<std::size_t>(it - cum.begin()), cum.size() - 1);
}

struct KernelCertificate {
  Json record;
  bool certified = false;
  std::string failed_stage;
};

KernelCertificate certify(const RootSolution& sol, const KernelExtraction& ex, const DiscreteMeasure& mu,
                          const DiscreteMeasure& nu, double w1_tol, const RunConfig& c) {
  KernelCertificate out;
  const auto kr = validate_kernel(ex.kernel, c.tol.kernel_mean);
  const auto lm = is_lipschitz_markov(ex.kernel, c.tol.order);
  const double gap = w1(pushforward(mu, ex.kernel), nu);
  const bool converged = sol.obstacle.status == SolveStatus::Converged;
  if (!converged) {
    out.failed_stage = "root";
  } else if (!ex.leak_ok) {
    out.failed_stage = "extraction";
  } else if (!kr.pass) {
    out.failed_stage = "martingale";
  } else if (!lm.pass) {
    out.failed_stage = "lipschitz_markov";
  } else if (gap > w1_tol) {
    out.failed_stage = "pushforward";
  }
  out.certified = out.failed_stage.empty();
  out.record = Json{{"solver", to_json(sol.obstacle)},
                    {"max_unabsorbed", ex.max_unabsorbed},
                    {"leak_ok", ex.leak_ok},
                    {"martingale_deviation", kr.max_deviation},
                    {"martingale_ok", kr.pass},
                    {"lipschitz_markov", to_json(lm)},
                    {"lip1_family_size", lip1_test_family(ex.kernel).size()},
                    {"pushforward_w1", gap},
                    {"pushforward_w1_tol", w1_tol},
                    {"certified", out.certified},
                    {"failed_stage", out.certified ? Json(nullptr) : Json(out.failed_stage)}};
  return out;
}

template <typename Fn>
auto run_parallel(std::size_t n, Fn fn) {
  using Result = decltype(fn(std::size_t{0}));
  const auto policy = std::thread::hardware_concurrency() > 1 ? std::launch::async : std::launch::deferred;
  std::vector<std::future<Result>> jobs;
  for (std::size_t i = 0; i < n; ++i) jobs.push_back(std::async(policy, fn, i));
  std::vector<Result> out;
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

}  // namespace

void RunConfig::validate() const {
  const auto positive = [](double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string(what) + " must be positive");
  };
  positive(tol.mass, "--tol-mass");
  positive(tol.mean, "--tol-mean");
  positive(tol.order, "--tol-order");
  if (tol.contact) positive(*tol.contact, "--tol-contact");
  positive(tol.stop, "--tol-stop");
  positive(tol.leak, "--tol-leak");
  positive(tol.kernel_mean, "--tol-kernel-mean");
  if (tol.w1) positive(*tol.w1, "--tol-w1");
  positive(tol.sim_w1, "--tol-sim-w1");
  positive(tol.drift, "--tol-drift");
  if (h) positive(*h, "--h");
  if (dt) positive(*dt, "--dt");
  if (t_max) positive(*t_max, "--t-max");
  if (walk_horizon) positive(*walk_horizon, "--walk-horizon");
}

Json config_json(const RunConfig& c) {
  return Json{{"command", c.command},
              {"input", c.input.generic_string()},
              {"out", c.out.generic_string()},
              {"h", opt(c.h)},
              {"dt", opt(c.dt)},
              {"t_max", opt(c.t_max)},
              {"walk_horizon", opt(c.walk_horizon)},
              {"n_paths", c.n_paths},
              {"seed", c.seed ? Json(*c.seed) : Json(nullptr)},
              {"tolerances",
               {{"mass", c.tol.mass},
                {"mean", c.tol.mean},
                {"order", c.tol.order},
                {"contact", opt(c.tol.contact)},
                {"stop", c.tol.stop},
                {"leak", c.tol.leak},
                {"kernel_mean", c.tol.kernel_mean},
                {"w1", opt(c.tol.w1)},
                {"sim_w1", c.tol.sim_w1},
                {"drift", c.tol.drift}}}};
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

int cmd_validate(const RunConfig& c, std::ostream& log) {
  const std::string bytes = read_bytes(c.input);
  const Json raw = read_json_file(c.input);
  const Peacock p = peacock_from_json(raw, c.tol.mass);
  std::filesystem::create_directories(c.out);
  const auto vr = validate(p, c.tol.order);
  const auto rc = right_continuity_report(p, c.tol.order);
  write_json_file(c.out / "validate_report.json",
                  Json{{"pass", vr.pass}, {"validation", to_json(vr)}, {"right_continuity", to_json(rc)}});
  write_manifest(c, bytes);
  if (!vr.pass) {
    for (const auto& e : vr.structural_errors) log << "validate: " << e << "\n";
    if (vr.first_failing_pair) {
      const auto& pair = vr.pairs[*vr.first_failing_pair];
      log << "validate: pair " << pair.index << " (t=" << format_double(p.times()[pair.index]) << " -> t="
          << format_double(p.times()[pair.index + 1]) << ") is not in convex order; call violation "
          << format_double(pair.worst_call_violation) << " at strike " << format_double(pair.worst_strike)
          << ", mean gap " << format_double(pair.mean_gap) << "\n";
    }
    return kExitVerification;
  }
  log << "validate: " << p.size() << " measures increase in convex order\n";
  return kExitOk;
}

int cmd_chain(const RunConfig& c, std::ostream& log) {
  const std::string bytes = read_bytes(c.input);
  const Json raw = read_json_file(c.input);
  const Peacock p = peacock_from_json(raw, c.tol.mass);
  std::filesystem::create_directories(c.out);
  write_manifest(c, bytes);

  Json report{{"pass", false}};
  const auto vr = validate(p, c.tol.order);
  report["validation"] = to_json(vr);
  if (!vr.pass) {
    report["failed_stage"] = "validation";
    write_json_file(c.out / "chain_report.json", report);
    log << "chain: failed at validation\n";
    return kExitVerification;
  }

  const GridSpec space = space_grid(raw, p.measures(), c);
  std::vector<DiscreteMeasure> marginals;
  Json projection = Json::array();
  for (const auto& m : p.measures()) {
    marginals.push_back(project_to_grid(m, space));
    projection.push_back(w1(m, marginals.back()));
  }
  report["grid"] = to_json(space);
  report["projection_w1"] = projection;
  const double w1_tol = c.tol.w1.value_or(5.0 * space.h);
  const RootOptions opts = root_options(c);
  const std::size_t n_kernels = marginals.size() - 1;

  // Pair solves are independent; extraction follows the chain in order.
  auto solved = run_parallel(n_kernels, [&](std::size_t k) -> std::pair<std::optional<RootSolution>, std::string> {
    try {
      const GridSpec g = pair_grid(space, marginals[k], marginals[k + 1], c);
      return {solve_barrier(marginals[k], marginals[k + 1], g, opts), ""};
    } catch (const std::invalid_argument& e) {
      return {std::nullopt, e.what()};
    }
  });

  std::vector<MartingaleKernel> kernels;
  Json records = Json::array();
  std::string csv = "pair,x,entry_time\n";
  DiscreteMeasure actual = marginals.front();
  bool pass = true;
  std::string failed_stage;
  std::optional<std::size_t> failed_pair;
  for (std::size_t k = 0; k < n_kernels; ++k) {
    auto& [sol, error] = solved[k];
    if (!sol) {
      records.push_back(Json{{"pair", k}, {"certified", false}, {"failed_stage", "root"}, {"error", error}});
      if (pass) {
        failed_stage = "root";
        failed_pair = k;
      }
      pass = false;
      break;
    }
    const auto sources = union_points(marginals[k], actual);
    const auto ex = extract_kernel(sources, sol->barrier, opts);
    auto cert = certify(*sol, ex, marginals[k], marginals[k + 1], w1_tol, c);
    actual = pushforward(actual, ex.kernel);
    cert.record["pair"] = k;
    cert.record["times"] = {p.times()[k], p.times()[k + 1]};
    cert.record["chain_marginal_w1"] = w1(actual, marginals[k + 1]);
    records.push_back(cert.record);
    if (!cert.certified && pass) {
      pass = false;
      failed_stage = cert.failed_stage;
      failed_pair = k;
    }
    const Barrier& b = sol->barrier;
    for (std::size_t i = 0; i < b.grid().num_points(); ++i) {
      csv += std::to_string(k) + "," + format_double(b.grid().point(i)) + "," + format_double(b.entry_time(i)) + "\n";
    }
    kernels.push_back(ex.kernel);
  }

  Json kernel_json = Json::array();
  for (const auto& k : kernels) kernel_json.push_back(to_json(k));
  write_json_file(c.out / "peacock.json", to_json(Peacock(p.times(), marginals)));
  write_json_file(c.out / "kernels.json", Json{{"times", p.times()}, {"kernels", kernel_json}});
  write_text_file(c.out / "barriers.csv", csv);

  report["pass"] = pass;
  report["kernels"] = records;
  report["kernel_count"] = kernels.size();
  report["failed_stage"] = pass ? Json(nullptr) : Json(failed_stage);
  report["failed_pair"] = failed_pair ? Json(*failed_pair) : Json(nullptr);
  write_json_file(c.out / "chain_report.json", report);
  if (!pass) {
    log << "chain: pair " << *failed_pair << " failed at " << failed_stage << "\n";
    return kExitVerification;
  }
  log << "chain: " << kernels.size() << " kernels certified\n";
  return kExitOk;
}

int cmd_simulate(const RunConfig& c, std::ostream& log) {
  if (!c.seed) {
    log << "simulate: --seed is required\n";
    return kExitFormat;
  }
  const auto peacock_path = c.input / "peacock.json";
  const auto kernels_path = c.input / "kernels.json";
  const std::string bytes = read_bytes(peacock_path) + read_bytes(kernels_path);
  const Peacock p = peacock_from_json(read_json_file(peacock_path), c.tol.mass);
  const Json kj = read_json_file(kernels_path);
  if (!kj.contains("kernels") || !kj.at("kernels").is_array()) throw FormatError("kernels.json: no kernel list");
  std::vector<MartingaleKernel> chain;
  for (const auto& k : kj.at("kernels")) chain.push_back(kernel_from_json(k, c.tol.mass));
  if (chain.size() + 1 != p.size()) throw FormatError("kernels.json: need one kernel per consecutive pair");

  std::filesystem::create_directories(c.out);
  write_manifest(c, bytes);

  const std::size_t n = c.n_paths;
  const std::size_t steps = p.size();
  const auto start_cum = cumulative(p.measures().front());
  std::vector<std::vector<std::vector<double>>> row_cum(chain.size());
  for (std::size_t k = 0; k < chain.size(); ++k) {
    for (const auto& t : chain[k].targets()) row_cum[k].push_back(cumulative(t));
  }

  // Path i draws from its own stream, so the output does not depend on
  // evaluation order.
  std::vector<double> values(n * steps);
  for (std::size_t i = 0; i < n; ++i) {
    PhiloxStream s(*c.seed, i);
    const auto& mu0 = p.measures().front();
    double x = mu0.atoms()[draw(start_cum, s.next_double())];
    values[i * steps] = x;
    for (std::size_t k = 0; k < chain.size(); ++k) {
      const std::size_t row = chain[k].find_source(x);
      if (row == chain[k].size()) throw FormatError("kernel " + std::to_string(k) + " has no row for " + format_double(x));
      const auto& target = chain[k].targets()[row];
      x = target.atoms()[draw(row_cum[k][row], s.next_double())];
      values[i * steps + k + 1] = x;
    }
  }

  std::string csv = "path";
  for (double t : p.times()) csv += "," + format_double(t);
  csv += "\n";
  for (std::size_t i = 0; i < n; ++i) {
    csv += std::to_string(i);
    for (std::size_t k = 0; k < steps; ++k) csv += "," + format_double(values[i * steps + k]);
    csv += "\n";
  }
  write_text_file(c.out / "paths.csv", csv);

  bool pass = true;
  Json per_time = Json::array();
  for (std::size_t k = 0; k < steps; ++k) {
    Json rec{{"time", p.times()[k]}};
    if (n > 0) {
      std::map<double, double> counts;
      for (std::size_t i = 0; i < n; ++i) counts[values[i * steps + k]] += 1.0;
      std::vector<double> xs;
      std::vector<double> ws;
      for (const auto& [x, w] : counts) {
        xs.push_back(x);
        ws.push_back(w);
      }
      const double d = w1(DiscreteMeasure::from_unnormalized(std::move(xs), std::move(ws)), p.measures()[k]);
      rec["w1"] = d;
      rec["pass"] = d <= c.tol.sim_w1;
      pass = pass && d <= c.tol.sim_w1;
    } else {
      rec["w1"] = nullptr;
      rec["pass"] = true;
    }
    per_time.push_back(rec);
  }

  Json drift = Json::array();
  double worst_drift = 0.0;
  std::vector<std::size_t> order(n);
  for (std::size_t k = 0; k + 1 < steps; ++k) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const double xa = values[a * steps + k];
      const double xb = values[b * steps + k];
      return xa < xb || (xa == xb && a < b);
    });
    Json buckets = Json::array();
    for (std::size_t b = 0; b < kDriftBuckets; ++b) {
      const std::size_t lo = b * n / kDriftBuckets;
      const std::size_t hi = (b + 1) * n / kDriftBuckets;
      if (lo == hi) continue;
      double level = 0.0;
      double inc = 0.0;
      for (std::size_t j = lo; j < hi; ++j) {
        const std::size_t i = order[j];
        level += values[i * steps + k];
        inc += values[i * steps + k + 1] - values[i * steps + k];
      }
      const double m = static_cast<double>(hi - lo);
      const double d = inc / m;
      worst_drift = std::max(worst_drift, std::abs(d));
      buckets.push_back(Json{{"bucket", b}, {"paths", hi - lo}, {"mean_level", level / m}, {"drift", d}});
    }
    drift.push_back(Json{{"from_time", p.times()[k]}, {"to_time", p.times()[k + 1]}, {"buckets", buckets}});
  }
  const bool drift_ok = worst_drift <= c.tol.drift;
  pass = pass && drift_ok;

  const auto& last = p.measures().back();
  double a = quantile(last, 0.25);
  double b = quantile(last, 0.75);
  if (!(a < b)) {
    a = last.min_atom() - 1.0;
    b = last.max_atom() + 1.0;
  }
  std::map<int, std::size_t> histogram;
  double total_up = 0.0;
  int max_up = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const int u = path_upcrossings(std::span<const double>(values.data() + i * steps, steps), a, b);
    ++histogram[u];
    total_up += u;
    max_up = std::max(max_up, u);
  }
  Json hist = Json::array();
  for (const auto& [u, count] : histogram) hist.push_back(Json{{"upcrossings", u}, {"paths", count}});

  write_json_file(c.out / "simulate_report.json",
                  Json{{"pass", pass},
                       {"n_paths", n},
                       {"seed", *c.seed},
                       {"generator", "philox4x32-10, key = seed, counter = (draw index, path index)"},
                       {"marginal_fit", per_time},
                       {"marginal_w1_tol", c.tol.sim_w1},
                       {"drift", drift},
                       {"max_abs_drift", worst_drift},
                       {"drift_tol", c.tol.drift},
                       {"upcrossings",
                        {{"a", a},
                         {"b", b},
                         {"mean", n > 0 ? Json(total_up / static_cast<double>(n)) : Json(nullptr)},
                         {"max", max_up},
                         {"histogram", hist}}}});
  log << "simulate: " << n << " paths, max |drift| " << format_double(worst_drift) << (pass ? ", pass\n" : ", FAIL\n");
  return pass ? kExitOk : kExitVerification;
}

int cmd_counterexample(const RunConfig& c, std::ostream& log) {
  std::filesystem::create_directories(c.out);
  write_manifest(c, "");
  const PathMeasure limit = counterexample(std::nullopt);
  Json entries = Json::array();
  const std::optional<unsigned> ns[] = {1u, 2u, 4u, 8u, std::nullopt};
  for (const auto& n : ns) {
    const PathMeasure pm = counterexample(n);
    Json coords = Json::array();
    for (double t : pm.times()) coords.push_back(w1(marginal(pm, t), marginal(limit, t)));
    entries.push_back(Json{{"n", n ? Json(*n) : Json("limit")},
                           {"path_measure", to_json(pm)},
                           {"is_markov", is_markov(pm, c.tol.order)},
                           {"markov_defect", markov_defect(pm)},
                           {"is_martingale", is_martingale(pm, c.tol.mean)},
                           {"w1_to_limit", coords}});
  }

  const HistoryFunctional x{1.0, {{1.0, 0.0, true}}};
  const HistoryFunctional y{1.0, {{1.0, 0.0, false}}};
  const auto lq = lq_inequality_check(limit, 2.0, 3.0, Lip1TestFunction::identity(), x, y, c.tol.order);
  double worst_gap = -std::numeric_limits<double>::infinity();
  const auto fs = threshold_functionals(limit, 2.0);
  std::size_t violations = 0;
  for (const auto& fx : fs) {
    for (const auto& fy : fs) {
      const auto r = lq_inequality_check(limit, 2.0, 3.0, Lip1TestFunction::identity(), fx, fy, c.tol.order);
      worst_gap = std::max(worst_gap, r.lhs - r.rhs);
      violations += r.holds ? 0 : 1;
    }
  }
  write_json_file(c.out / "counterexample.json",
                  Json{{"members", entries},
                       {"lq_limit",
                        {{"s", 2.0},
                         {"t", 3.0},
                         {"f", "identity"},
                         {"X", "1{S_1 = 1}"},
                         {"Y", "1{S_1 = -1}"},
                         {"lhs", lq.lhs},
                         {"rhs", lq.rhs},
                         {"holds", lq.holds}}},
                       {"lq_limit_threshold_family",
                        {{"pairs", fs.size() * fs.size()}, {"violations", violations}, {"worst_lhs_minus_rhs", worst_gap}}}});
  log << "counterexample: limit lhs " << format_double(lq.lhs) << " rhs " << format_double(lq.rhs)
      << (lq.holds ? " holds\n" : " violated\n");
  return kExitOk;
}

int cmd_root(const RunConfig& c, std::ostream& log) {
  const std::string bytes = read_bytes(c.input);
  const Json raw = read_json_file(c.input);
  if (!raw.is_object() || !raw.contains("mu") || !raw.contains("nu")) throw FormatError("root: need \"mu\" and \"nu\"");
  const DiscreteMeasure mu_in = measure_from_json(raw.at("mu"), c.tol.mass);
  const DiscreteMeasure nu_in = measure_from_json(raw.at("nu"), c.tol.mass);
  if (c.n_paths > 0 && !c.seed) {
    log << "root: --seed is required with --n-paths\n";
    return kExitFormat;
  }
  std::filesystem::create_directories(c.out);
  write_manifest(c, bytes);

  const GridSpec space = space_grid(raw, {mu_in, nu_in}, c);
  const DiscreteMeasure mu = project_to_grid(mu_in, space);
  const DiscreteMeasure nu = project_to_grid(nu_in, space);
  Json report{{"projection_w1", {w1(mu, mu_in), w1(nu, nu_in)}}};
  const RootOptions opts = root_options(c);
  std::optional<RootSolution> sol;
  try {
    sol = solve_barrier(mu, nu, pair_grid(space, mu, nu, c), opts);
  } catch (const std::invalid_argument& e) {
    report["pass"] = false;
    report["failed_stage"] = "root";
    report["error"] = e.what();
    write_json_file(c.out / "root_report.json", report);
    log << "root: " << e.what() << "\n";
    return kExitVerification;
  }
  const auto ex = extract_kernel(mu, sol->barrier, opts);
  auto cert = certify(*sol, ex, mu, nu, c.tol.w1.value_or(5.0 * space.h), c);
  report["kernel"] = cert.record;
  report["pass"] = cert.certified;
  if (c.n_paths > 0) {
    const auto mc = monte_carlo_embed(mu, sol->barrier, c.n_paths, *c.seed);
    report["monte_carlo"] = Json{{"n_paths", c.n_paths},
                                 {"seed", *c.seed},
                                 {"w1_to_nu", w1(mc.empirical, nu)},
                                 {"w1_to_kernel_pushforward", w1(mc.empirical, pushforward(mu, ex.kernel))},
                                 {"truncated", mc.truncated},
                                 {"empirical", to_json(mc.empirical)}};
  }
  write_text_file(c.out / "barrier.csv", barrier_csv(sol->barrier));
  write_json_file(c.out / "barrier.json", to_json(sol->barrier));
  write_json_file(c.out / "kernel.json", to_json(ex.kernel));
  write_json_file(c.out / "root_report.json", report);
  if (!cert.certified) {
    log << "root: failed at " << cert.failed_stage << "\n";
    return kExitVerification;
  }
  log << "root: kernel certified, pushforward W1 " << format_double(cert.record["pushforward_w1"].get<double>())
      << "\n";
  return kExitOk;
}

int run(const RunConfig& c, std::ostream& log) {
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    log << "error: " << e.what() << "\n";
    return kExitFormat;
  }
  try {
    if (c.command == "validate") return cmd_validate(c, log);
    if (c.command == "chain") return cmd_chain(c, log);
    if (c.command == "simulate") return cmd_simulate(c, log);
    if (c.command == "counterexample") return cmd_counterexample(c, log);
    if (c.command == "root") return cmd_root(c, log);
    log << "error: unknown command " << c.command << "\n";
    return kExitFormat;
  } catch (const FormatError& e) {
    log << "input error: " << e.what() << "\n";
    return kExitFormat;
  } catch (const std::filesystem::filesystem_error& e) {
    log << "input error: " << e.what() << "\n";
    return kExitFormat;
  } catch (const Json::exception& e) {
    log << "input error: " << e.what() << "\n";
    return kExitFormat;
  } catch (const std::exception& e) {
    log << "failure: " << e.what() << "\n";
    return kExitVerification;
  }
}

}  // namespace kellerer::app
