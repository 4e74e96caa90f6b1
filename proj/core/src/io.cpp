#include "kellerer/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace kellerer {

namespace {

std::vector<double> number_array(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key) || !j.at(key).is_array()) {
    throw FormatError(std::string("expected an array field \"") + key + "\"");
  }
  std::vector<double> out;
  for (const auto& v : j.at(key)) {
    if (!v.is_number()) throw FormatError(std::string("non-numeric entry in \"") + key + "\"");
    out.push_back(v.get<double>());
  }
  return out;
}

double number_field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key) || !j.at(key).is_number()) {
    throw FormatError(std::string("expected a numeric field \"") + key + "\"");
  }
  return j.at(key).get<double>();
}

template <typename Fn>
auto guarded(const char* what, Fn fn) {
  try {
    return fn();
  } catch (const FormatError&) {
    throw;
  } catch (const std::exception& e) {
    throw FormatError(std::string(what) + ": " + e.what());
  }
}

}  // namespace

std::string format_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

Json to_json(const DiscreteMeasure& mu) {
  return Json{{"atoms", std::vector<double>(mu.atoms().begin(), mu.atoms().end())},
              {"weights", std::vector<double>(mu.weights().begin(), mu.weights().end())}};
}

DiscreteMeasure measure_from_json(const Json& j, double mass_tol) {
  return guarded("measure", [&] {
    auto atoms = number_array(j, "atoms");
    auto weights = number_array(j, "weights");
    if (atoms.empty() || atoms.size() != weights.size()) {
      throw FormatError("measure: atoms and weights must be non-empty and of equal length");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      if (i > 0 && !(atoms[i] > atoms[i - 1])) {
        throw FormatError("measure: atoms must be strictly increasing");
      }
      if (!(weights[i] > 0.0)) throw FormatError("measure: weights must be positive");
      total += weights[i];
    }
    if (std::abs(total - 1.0) > mass_tol) {
      throw FormatError("measure: total mass differs from 1 by " + format_double(total - 1.0));
    }
    return DiscreteMeasure::from_unnormalized(std::move(atoms), std::move(weights));
  });
}

Json to_json(const GridSpec& g) {
  return Json{{"x_min", g.x_min}, {"x_max", g.x_max}, {"h", g.h}, {"dt", g.dt}, {"t_max", g.t_max}};
}

GridSpec grid_from_json(const Json& j) {
  return guarded("grid", [&] {
    GridSpec g;
    g.x_min = number_field(j, "x_min");
    g.x_max = number_field(j, "x_max");
    g.h = number_field(j, "h");
    g.dt = j.contains("dt") ? number_field(j, "dt") : g.h * g.h / 3.0;
    g.t_max = j.contains("t_max") ? number_field(j, "t_max") : 1.0;
    g.validate();
    return g;
  });
}

Json to_json(const Peacock& p) {
  Json ms = Json::array();
  for (const auto& m : p.measures()) ms.push_back(to_json(m));
  return Json{{"times", p.times()}, {"measures", ms}};
}

Peacock peacock_from_json(const Json& j, double mass_tol) {
  return guarded("peacock", [&] {
    if (j.is_object() && j.contains("family")) {
      if (j.at("family") != "gaussian") throw FormatError("peacock: unknown family");
      const auto variances = number_array(j, "variances");
      if (variances.empty()) throw FormatError("peacock: no variances");
      if (!j.contains("grid")) throw FormatError("peacock: parametric family needs a grid");
      const GridSpec grid = grid_from_json(j.at("grid"));
      const double m = j.contains("mean") ? number_field(j, "mean") : 0.0;
      std::vector<double> times;
      if (j.contains("times")) {
        times = number_array(j, "times");
      } else {
        for (double v : variances) times.push_back(v / variances.back());
        times.back() = 1.0;
      }
      std::vector<DiscreteMeasure> measures;
      for (double v : variances) measures.push_back(discretized_gaussian(m, v, grid));
      return Peacock(std::move(times), std::move(measures));
    }
    const auto times = number_array(j, "times");
    if (!j.contains("measures") || !j.at("measures").is_array()) {
      throw FormatError("peacock: expected an array field \"measures\"");
    }
    std::vector<DiscreteMeasure> measures;
    for (const auto& m : j.at("measures")) measures.push_back(measure_from_json(m, mass_tol));
    return Peacock(times, std::move(measures));
  });
}

Json to_json(const MartingaleKernel& k) {
  Json ts = Json::array();
  for (const auto& t : k.targets()) ts.push_back(to_json(t));
  return Json{{"sources", k.sources()}, {"targets", ts}};
}

MartingaleKernel kernel_from_json(const Json& j, double mass_tol) {
  return guarded("kernel", [&] {
    auto sources = number_array(j, "sources");
    if (!j.contains("targets") || !j.at("targets").is_array()) {
      throw FormatError("kernel: expected an array field \"targets\"");
    }
    std::vector<DiscreteMeasure> targets;
    for (const auto& t : j.at("targets")) targets.push_back(measure_from_json(t, mass_tol));
    return MartingaleKernel(std::move(sources), std::move(targets));
  });
}

Json to_json(const PathMeasure& p) {
  return Json{{"times", p.times()}, {"paths", p.paths()}, {"weights", p.weights()}};
}

PathMeasure path_measure_from_json(const Json& j) {
  return guarded("path measure", [&] {
    auto times = number_array(j, "times");
    auto weights = number_array(j, "weights");
    if (!j.contains("paths") || !j.at("paths").is_array()) {
      throw FormatError("path measure: expected an array field \"paths\"");
    }
    auto paths = j.at("paths").get<std::vector<Path>>();
    return PathMeasure(std::move(times), std::move(paths), std::move(weights));
  });
}

Json to_json(const Barrier& b) {
  Json times = Json::array();
  Json steps = Json::array();
  for (std::size_t i = 0; i < b.entry_steps().size(); ++i) {
    if (b.entry_steps()[i] == Barrier::kNever) {
      times.push_back(nullptr);
      steps.push_back(nullptr);
    } else {
      times.push_back(b.entry_time(i));
      steps.push_back(b.entry_steps()[i]);
    }
  }
  return Json{{"grid", to_json(b.grid())},
              {"walk_horizon", b.walk_horizon()},
              {"entry_time", times},
              {"entry_step", steps}};
}

Barrier barrier_from_json(const Json& j) {
  return guarded("barrier", [&] {
    const GridSpec g = grid_from_json(j.at("grid"));
    std::vector<std::int64_t> steps;
    if (j.contains("entry_step")) {
      for (const auto& s : j.at("entry_step")) {
        steps.push_back(s.is_null() ? Barrier::kNever : s.get<std::int64_t>());
      }
    } else {
      for (const auto& t : j.at("entry_time")) {
        steps.push_back(t.is_null() ? Barrier::kNever : std::llround(t.get<double>() / g.dt));
      }
    }
    std::optional<double> walk;
    if (j.contains("walk_horizon")) walk = number_field(j, "walk_horizon");
    return Barrier(g, std::move(steps), walk);
  });
}

std::string barrier_csv(const Barrier& b) {
  std::string out = "x,entry_time\n";
  for (std::size_t i = 0; i < b.entry_steps().size(); ++i) {
    out += format_double(b.grid().point(i));
    out += ',';
    out += format_double(b.entry_time(i));
    out += '\n';
  }
  return out;
}

Json to_json(const ObstacleSolution& s) {
  return Json{{"grid", to_json(s.grid)},
              {"status", s.status == SolveStatus::Converged ? "converged" : "horizon_reached"},
              {"steps", s.steps},
              {"final_time", s.final_time},
              {"residual", s.residual},
              {"contact_tol", s.contact_tol},
              {"max_decrease", s.max_decrease},
              {"max_contact_gap", s.max_contact_gap}};
}

Json to_json(const LmCertificate& c) {
  Json pairs = Json::array();
  for (const auto& p : c.pairs) {
    pairs.push_back({{"index", p.index}, {"gap", p.gap}, {"w1", p.w1}, {"fsd", p.fsd}});
  }
  return Json{{"lipschitz_markov", c.pass}, {"worst_excess", c.worst_excess}, {"pairs", pairs}};
}

Json to_json(const PeacockReport& r) {
  Json pairs = Json::array();
  for (const auto& p : r.pairs) {
    pairs.push_back({{"index", p.index},
                     {"in_order", p.in_order},
                     {"mean_gap", p.mean_gap},
                     {"worst_call_violation", p.worst_call_violation},
                     {"worst_strike", p.worst_strike}});
  }
  Json j{{"pass", r.pass}, {"structural_errors", r.structural_errors}, {"pairs", pairs}};
  j["first_failing_pair"] = r.first_failing_pair ? Json(*r.first_failing_pair) : Json(nullptr);
  return j;
}

Json to_json(const RightContinuityReport& r) {
  return Json{{"phi_integrals", r.phi_integrals},
              {"non_decreasing", r.non_decreasing},
              {"max_jump", r.max_jump},
              {"max_jump_index", r.max_jump_index},
              {"max_decrease", r.max_decrease}};
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  out << text;
  if (!out) throw FormatError("write failed for " + path.string());
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

}  // namespace kellerer
