#pragma once

// Batch pipeline behind the kellerer command-line tool. Every command
// returns an exit code: 0 success, 1 verification failure, 2 input or
// format error.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "kellerer/io.hpp"

namespace kellerer::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerification = 1;
inline constexpr int kExitFormat = 2;

struct RunTolerances {
  double mass = 1e-12;
  double mean = 1e-9;
  double order = 1e-9;
  std::optional<double> contact;
  double stop = 1e-8;
  double leak = 1e-6;
  double kernel_mean = 1e-6;
  /// Pushforward gap allowed per Root kernel. Default 5 h.
  std::optional<double> w1;
  double sim_w1 = 0.05;
  double drift = 0.02;
};

struct RunConfig {
  std::string command;
  std::filesystem::path input;
  std::filesystem::path out = ".";
  std::optional<double> h;
  std::optional<double> dt;
  std::optional<double> t_max;
  std::optional<double> walk_horizon;
  std::size_t n_paths = 0;
  std::optional<std::uint64_t> seed;
  RunTolerances tol;

  /// Throws std::invalid_argument on nonpositive tolerances or steps.
  void validate() const;
};

Json config_json(const RunConfig& c);

/// 64-bit FNV-1a of a byte string.
std::uint64_t fnv1a64(const std::string& bytes);

/// Writes peacock validation and right-continuity reports.
int cmd_validate(const RunConfig& c, std::ostream& log);
/// Root barrier and kernel for each consecutive pair, with certification.
int cmd_chain(const RunConfig& c, std::ostream& log);
/// Samples paths through a chain written by cmd_chain; `input` is its
/// output directory.
int cmd_simulate(const RunConfig& c, std::ostream& log);
/// Markov laws converging to a non-Markov law.
int cmd_counterexample(const RunConfig& c, std::ostream& log);
/// Barrier and kernel for a single pair {"mu": ..., "nu": ..., "grid"?: ...}.
int cmd_root(const RunConfig& c, std::ostream& log);

/// Dispatches on c.command, mapping exceptions to exit codes.
int run(const RunConfig& c, std::ostream& log);

}  // namespace kellerer::app
