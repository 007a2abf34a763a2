#include <iostream>

#include "CLI11.hpp"

#include "commands.h"

int main(int argc, char** argv) {
  using namespace aktest::cli;
  CLI::App app{"A_k closeness tester, exact oracles and hard-instance generators"};
  app.require_subcommand(1);

  TestCommand test;
  std::uint64_t test_seed = 0;
  std::string test_mode, test_constants;
  double test_budget = 0.0;
  auto* test_cmd = app.add_subcommand("test", "Run the closeness tester on two distribution specs");
  test_cmd->add_option("p", test.p_spec, "Distribution spec of p")->required();
  test_cmd->add_option("q", test.q_spec, "Distribution spec of q")->required();
  test_cmd->add_option("--k", test.k, "Number of rectangles")->required();
  test_cmd->add_option("--eps", test.eps, "Distance parameter")->capture_default_str();
  test_cmd->add_flag("--tv", test.tv, "Treat eps as a total-variation distance between k-histograms");
  test_cmd->add_option("--seed", test_seed, "Random seed (u64)");
  auto* test_mode_opt = test_cmd->add_option("--mode", test_mode, "paper or practical");
  auto* test_constants_opt = test_cmd->add_option("--constants", test_constants, "Constants file");
  auto* test_budget_opt = test_cmd->add_option("--budget-multiplier", test_budget, "Scales the l2-stage budget");

  OracleCommand oracle;
  auto* oracle_cmd = app.add_subcommand("oracle", "Exact A_k distance of two small distributions");
  oracle_cmd->add_option("p", oracle.p_spec, "Distribution spec of p")->required();
  oracle_cmd->add_option("q", oracle.q_spec, "Distribution spec of q")->required();
  oracle_cmd->add_option("--k", oracle.k, "Number of rectangles")->required();

  GenHardCommand hard;
  auto* hard_cmd = app.add_subcommand("gen-hard", "Write a heavy/light diagonal hard instance");
  hard_cmd->add_option("--k", hard.k, "k")->required();
  hard_cmd->add_option("--m", hard.m, "Heavy-square parameter m < k/2")->required();
  hard_cmd->add_option("--eps", hard.eps, "Light-square mass scale in (0, 1]")->capture_default_str();
  hard_cmd->add_option("--case", hard.hard_case, "equal or far")->required();
  hard_cmd->add_option("--seed", hard.seed, "Random seed (u64)");
  hard_cmd->add_option("--out", hard.out_dir, "Output directory")->required();
  hard_cmd->add_option("--atoms-per-edge", hard.atoms_per_edge, "Discretization atoms per gadget edge")->capture_default_str();

  ExperimentCommand exp;
  std::uint64_t exp_seed = 0;
  std::int64_t exp_trials = 0;
  int exp_jobs = 1;
  std::string exp_out, exp_mode, exp_constants;
  auto* exp_cmd = app.add_subcommand("experiment", "Run a seeded sweep and write a results CSV");
  exp_cmd->add_option("config", exp.config_file, "Experiment config file")->required();
  auto* exp_out_opt = exp_cmd->add_option("--out", exp_out, "Results CSV path");
  auto* exp_trials_opt = exp_cmd->add_option("--trials", exp_trials, "Trials per sweep cell");
  auto* exp_jobs_opt = exp_cmd->add_option("--jobs", exp_jobs, "Worker threads");
  auto* exp_seed_opt = exp_cmd->add_option("--seed", exp_seed, "Master seed (u64)");
  auto* exp_mode_opt = exp_cmd->add_option("--mode", exp_mode, "paper or practical");
  auto* exp_constants_opt = exp_cmd->add_option("--constants", exp_constants, "Constants file");

  VerifyCommand verify;
  auto* verify_cmd = app.add_subcommand("verify", "Run an invariant suite");
  verify_cmd->add_option("suite", verify.suite,
                         "covering, split, square-edge, order-tuples, ramsey, pair-mass, carve or all")
      ->required();
  verify_cmd->add_option("--seed", verify.seed, "Random seed (u64)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (test_cmd->parsed()) {
    test.tester.seed = test_seed;
    if (*test_mode_opt) test.tester.mode = test_mode;
    if (*test_constants_opt) test.tester.constants_file = test_constants;
    if (*test_budget_opt) test.tester.budget_multiplier = test_budget;
    return RunTestCommand(test, std::cout, std::cerr);
  }
  if (oracle_cmd->parsed()) return RunOracleCommand(oracle, std::cout, std::cerr);
  if (hard_cmd->parsed()) return RunGenHardCommand(hard, std::cout, std::cerr);
  if (exp_cmd->parsed()) {
    if (*exp_out_opt) exp.out = exp_out;
    if (*exp_trials_opt) exp.trials = exp_trials;
    if (*exp_jobs_opt) exp.jobs = exp_jobs;
    if (*exp_seed_opt) exp.seed = exp_seed;
    if (*exp_mode_opt) exp.mode = exp_mode;
    if (*exp_constants_opt) exp.constants_file = exp_constants;
    return RunExperimentCommand(exp, std::cout, std::cerr);
  }
  return RunVerifyCommand(verify, std::cout, std::cerr);
}
