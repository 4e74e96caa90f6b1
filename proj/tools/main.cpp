#include <iostream>

#include "CLI11.hpp"
#include "app.hpp"

int main(int argc, char** argv) {
  using kellerer::app::RunConfig;
  CLI::App cli{"Convex-order peacocks, Root barriers and Lipschitz-Markov chains"};
  // --h is the space step, so help is long-form only.
  cli.set_help_flag("--help", "Print this help message and exit");
  cli.require_subcommand(1);
  RunConfig cfg;

  const auto add_common = [&](CLI::App* sub, bool needs_input) {
    sub->set_help_flag("--help", "Print this help message and exit");
    auto* in = sub->add_option("--input", cfg.input, "Input file (chain directory for simulate)");
    if (needs_input) in->required();
    sub->add_option("--out", cfg.out, "Output directory")->capture_default_str();
    sub->add_option("--h", cfg.h, "Space step");
    sub->add_option("--dt", cfg.dt, "Time step (default h^2/3)");
    sub->add_option("--t-max", cfg.t_max, "Solver horizon (default 4 (Var nu - Var mu) + 1)");
    sub->add_option("--walk-horizon", cfg.walk_horizon, "Walk horizon (default 20 t_max)");
    sub->add_option("--n-paths", cfg.n_paths, "Number of simulated paths");
    sub->add_option("--seed", cfg.seed, "Random seed");
    sub->add_option("--tol-mass", cfg.tol.mass, "Total mass tolerance")->capture_default_str();
    sub->add_option("--tol-mean", cfg.tol.mean, "Mean tolerance")->capture_default_str();
    sub->add_option("--tol-order", cfg.tol.order, "Convex order tolerance")->capture_default_str();
    sub->add_option("--tol-contact", cfg.tol.contact, "Obstacle contact tolerance");
    sub->add_option("--tol-stop", cfg.tol.stop, "Obstacle residual stop tolerance")->capture_default_str();
    sub->add_option("--tol-leak", cfg.tol.leak, "Unabsorbed mass tolerance")->capture_default_str();
    sub->add_option("--tol-kernel-mean", cfg.tol.kernel_mean, "Kernel martingale tolerance")->capture_default_str();
    sub->add_option("--tol-w1", cfg.tol.w1, "Pushforward W1 tolerance (default 5 h)");
    sub->add_option("--tol-sim-w1", cfg.tol.sim_w1, "Simulated marginal W1 tolerance")->capture_default_str();
    sub->add_option("--tol-drift", cfg.tol.drift, "Conditional mean drift tolerance")->capture_default_str();
  };

  add_common(cli.add_subcommand("validate", "Check that a peacock increases in convex order"), true);
  add_common(cli.add_subcommand("chain", "Build and certify the Root kernel chain"), true);
  add_common(cli.add_subcommand("simulate", "Sample paths through a chain directory"), true);
  add_common(cli.add_subcommand("counterexample", "Markov laws with a non-Markov limit"), false);
  add_common(cli.add_subcommand("root", "Root barrier and kernel for one pair"), true);

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e);
    return code == 0 ? 0 : kellerer::app::kExitFormat;
  }
  cfg.command = cli.get_subcommands().front()->get_name();
  return kellerer::app::run(cfg, std::cerr);
}
