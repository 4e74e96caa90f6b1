#pragma once

// JSON and CSV formats for measures, peacocks, kernels, path measures and
// barriers.

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kellerer/grid.hpp"
#include "kellerer/kernels.hpp"
#include "kellerer/measures.hpp"
#include "kellerer/path_measure.hpp"
#include "kellerer/peacock.hpp"
#include "kellerer/root.hpp"

namespace kellerer {

/// Malformed or unreadable input.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Json = nlohmann::json;

Json to_json(const DiscreteMeasure& mu);
/// Rejects non-increasing atoms, nonpositive weights, and total mass off
/// by more than mass_tol.
DiscreteMeasure measure_from_json(const Json& j, double mass_tol = Tolerances{}.mass);

Json to_json(const GridSpec& g);
GridSpec grid_from_json(const Json& j);

Json to_json(const Peacock& p);
/// Accepts either {"times", "measures"} or a parametric Gaussian family
/// {"family": "gaussian", "variances": [...], "grid": {...}, "mean"?, "times"?},
/// expanded here into grid measures. Without "times", the variances are
/// divided by the last one.
Peacock peacock_from_json(const Json& j, double mass_tol = Tolerances{}.mass);

Json to_json(const MartingaleKernel& k);
MartingaleKernel kernel_from_json(const Json& j, double mass_tol = Tolerances{}.mass);

Json to_json(const PathMeasure& p);
PathMeasure path_measure_from_json(const Json& j);

/// {"grid": {...}, "walk_horizon": T, "entry_time": [t or null], "entry_step": [n or null]}
Json to_json(const Barrier& b);
Barrier barrier_from_json(const Json& j);
/// Rows "x,entry_time" with "inf" for points that never enter.
std::string barrier_csv(const Barrier& b);

Json to_json(const ObstacleSolution& s);
Json to_json(const LmCertificate& c);
Json to_json(const PeacockReport& r);
Json to_json(const RightContinuityReport& r);

/// Shortest decimal form that round-trips, as used in every CSV artifact.
std::string format_double(double x);

Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);
void write_json_file(const std::filesystem::path& path, const Json& j);

}  // namespace kellerer
