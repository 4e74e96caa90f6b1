#include <filesystem>
#include <fstream>
#include <sstream>

#include "app.hpp"
#include "doctest.h"

using namespace kellerer;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("kellerer_cli_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void put(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

int run(app::RunConfig c) {
  std::ostringstream log;
  return app::run(c, log);
}

app::RunConfig config(const std::string& command, const fs::path& input, const fs::path& out) {
  app::RunConfig c;
  c.command = command;
  c.input = input;
  c.out = out;
  return c;
}

const char* kGaussian =
    R"({"family": "gaussian", "variances": [0.25, 0.5, 1.0], "grid": {"x_min": -6, "x_max": 6, "h": 0.1}})";

}  // namespace

TEST_CASE("validate exit codes") {
  TempDir d("validate");
  put(d.path / "good.json", kGaussian);
  put(d.path / "rev.json",
      R"({"times":[0.5,1],"measures":[{"atoms":[-1,1],"weights":[0.5,0.5]},{"atoms":[0],"weights":[1]}]})");
  put(d.path / "trunc.json", R"({"times":[0.5,1],"measures":[{"atoms":[-1,1)");
  CHECK(run(config("validate", d.path / "good.json", d.path / "a")) == app::kExitOk);
  CHECK(run(config("validate", d.path / "rev.json", d.path / "b")) == app::kExitVerification);
  const auto report = read_json_file(d.path / "b" / "validate_report.json");
  CHECK(report["validation"]["first_failing_pair"] == 0);
  CHECK(run(config("validate", d.path / "trunc.json", d.path / "c")) == app::kExitFormat);
  CHECK(run(config("validate", d.path / "absent.json", d.path / "c")) == app::kExitFormat);
  auto bad = config("validate", d.path / "good.json", d.path / "d");
  bad.tol.order = 0.0;
  CHECK(run(bad) == app::kExitFormat);
}

TEST_CASE("chain, simulate and determinism") {
  TempDir d("chain");
  put(d.path / "g.json", kGaussian);
  REQUIRE(run(config("chain", d.path / "g.json", d.path / "chain")) == app::kExitOk);
  const auto report = read_json_file(d.path / "chain" / "chain_report.json");
  CHECK(report["kernel_count"] == 2);
  CHECK(report["pass"] == true);
  CHECK(fs::exists(d.path / "chain" / "barriers.csv"));
  CHECK(fs::exists(d.path / "chain" / "manifest.json"));

  auto sim = config("simulate", d.path / "chain", d.path / "s1");
  sim.n_paths = 2000;
  sim.seed = 11;
  // Fit tolerances scaled to 2000 paths.
  sim.tol.sim_w1 = 0.2;
  sim.tol.drift = 0.2;
  CHECK(run(sim) == app::kExitOk);
  sim.out = d.path / "s2";
  CHECK(run(sim) == app::kExitOk);
  for (const char* f : {"paths.csv", "simulate_report.json"}) {
    CHECK(slurp(d.path / "s1" / f) == slurp(d.path / "s2" / f));
  }
  sim.seed = 12;
  sim.out = d.path / "s3";
  CHECK(run(sim) == app::kExitOk);
  CHECK(slurp(d.path / "s1" / "paths.csv") != slurp(d.path / "s3" / "paths.csv"));

  sim.n_paths = 0;
  sim.out = d.path / "s4";
  CHECK(run(sim) == app::kExitOk);
  CHECK(slurp(d.path / "s4" / "paths.csv") == "path,0.25,0.5,1\n");

  sim.seed.reset();
  CHECK(run(sim) == app::kExitFormat);

  auto strict = config("simulate", d.path / "chain", d.path / "s6");
  strict.n_paths = 50;
  strict.seed = 3;
  strict.tol.sim_w1 = 1e-6;
  CHECK(run(strict) == app::kExitVerification);
  auto missing = config("simulate", d.path / "nowhere", d.path / "s5");
  missing.seed = 1;
  CHECK(run(missing) == app::kExitFormat);

  // Rerunning the chain reproduces its artifacts byte for byte.
  REQUIRE(run(config("chain", d.path / "g.json", d.path / "chain2")) == app::kExitOk);
  for (const char* f : {"kernels.json", "barriers.csv", "chain_report.json", "peacock.json"}) {
    CHECK(slurp(d.path / "chain" / f) == slurp(d.path / "chain2" / f));
  }
}

TEST_CASE("chain edge cases") {
  TempDir d("edge");
  put(d.path / "single.json", R"({"times":[1],"measures":[{"atoms":[0],"weights":[1]}]})");
  CHECK(run(config("chain", d.path / "single.json", d.path / "a")) == app::kExitOk);
  CHECK(read_json_file(d.path / "a" / "kernels.json")["kernels"].empty());
  put(d.path / "rev.json",
      R"({"times":[0.5,1],"measures":[{"atoms":[-1,1],"weights":[0.5,0.5]},{"atoms":[0],"weights":[1]}]})");
  CHECK(run(config("chain", d.path / "rev.json", d.path / "b")) == app::kExitVerification);
  CHECK(read_json_file(d.path / "b" / "chain_report.json")["failed_stage"] == "validation");
}

TEST_CASE("counterexample and root") {
  TempDir d("misc");
  CHECK(run(config("counterexample", "", d.path / "ce")) == app::kExitOk);
  const auto ce = read_json_file(d.path / "ce" / "counterexample.json");
  CHECK(ce["lq_limit"]["lhs"] == 0.5);
  CHECK(ce["lq_limit"]["rhs"] == 0.0);
  CHECK(ce["lq_limit"]["holds"] == false);
  CHECK(ce["members"][4]["is_markov"] == false);
  CHECK(ce["members"][2]["w1_to_limit"][1] == 0.25);

  put(d.path / "pair.json",
      R"({"mu":{"atoms":[0],"weights":[1]},"nu":{"atoms":[-1,1],"weights":[0.5,0.5]}})");
  auto root = config("root", d.path / "pair.json", d.path / "r");
  CHECK(run(root) == app::kExitOk);
  CHECK(fs::exists(d.path / "r" / "barrier.csv"));
  root.n_paths = 100;
  CHECK(run(root) == app::kExitFormat);
  put(d.path / "bad.json",
      R"({"mu":{"atoms":[-1,1],"weights":[0.5,0.5]},"nu":{"atoms":[0],"weights":[1]}})");
  CHECK(run(config("root", d.path / "bad.json", d.path / "r2")) == app::kExitVerification);
}

TEST_CASE("input hash") {
  CHECK(app::fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(app::fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(app::fnv1a64("foobar") == 0x85944171f73967e8ULL);
}
