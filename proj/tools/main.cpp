// rkhs-sgd: dataset generation, exact solve, single SGD trajectory and
// Monte-Carlo convergence study.

#include <CLI11.hpp>
#include <iostream>

#include "rkhs_sgd/commands.hpp"

int main(int argc, char** argv) {
  using namespace rkhs::cli;

  CLI::App app{"Projected stochastic gradient descent in a reproducing-kernel Hilbert space"};
  app.require_subcommand(1);

  GenDataOptions gen;
  auto* gen_cmd = app.add_subcommand("gen-data", "Sample a synthetic regression dataset");
  gen_cmd->add_option("--n", gen.n, "Number of points")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--d", gen.d, "Input dimension")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--m", gen.m, "Output dimension")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--noise-sd", gen.noise_sd, "Label noise standard deviation")->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--seed", gen.seed, "Random seed");
  gen_cmd->add_option("--out", gen.out, "Output CSV path");

  RunOptions run;
  std::optional<unsigned> threads;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", run.config, "Run configuration file");
    cmd->add_option("--data", run.data, "Dataset CSV (overrides io.data_path)");
    cmd->add_option("--seed", run.seed, "Override sgd.seed");
    cmd->add_option("--steps", run.steps, "Override sgd.steps");
    cmd->add_option("--out", run.out, "Override io.out_dir");
  };
  auto* exact_cmd = app.add_subcommand("exact", "Solve for the exact minimizer f*");
  add_common(exact_cmd);
  auto* sgd_cmd = app.add_subcommand("sgd", "Run one SGD trajectory");
  add_common(sgd_cmd);
  sgd_cmd->add_option("--oracle", run.oracle, "Expansion CSV of f* for error tracking");
  auto* study_cmd = app.add_subcommand("study", "Monte-Carlo convergence study");
  add_common(study_cmd);
  study_cmd->add_option("--trials", run.trials, "Override study.trials");
  study_cmd->add_option("--threads", threads, "Worker threads (default: RKHS_SGD_THREADS or all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kValidation;
  }

  if (*gen_cmd) return cmd_gen_data(gen, std::cout, std::cerr);
  if (*exact_cmd) return cmd_exact(run, std::cout, std::cerr);
  if (*sgd_cmd) return cmd_sgd(run, std::cout, std::cerr);
  run.threads = threads_from_env(threads);
  return cmd_study(run, std::cout, std::cerr);
}
