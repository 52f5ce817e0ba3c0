#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lawfuzz/commands.hpp"
#include "lawfuzz/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"lawfuzz: traffic-law robustness monitoring and coverage-guided fuzzing"};
  app.set_version_flag("--version", std::string(lawfuzz::kVersion));
  app.require_subcommand(1);

  // check
  std::string spec_path, trace_path;
  auto* check = app.add_subcommand("check", "score a trace against a law spec");
  check->add_option("spec", spec_path, "law spec (.lb)")->required();
  check->add_option("trace", trace_path, "trace file (JSONL)")->required();

  // theta
  std::string theta_spec;
  auto* theta = app.add_subcommand("theta", "dump the violation set of a law");
  theta->add_option("spec", theta_spec, "law spec (.lb)")->required();

  // fuzz
  std::string campaign_path, out_dir = "out";
  lawfuzz::FuzzOverrides fo;
  std::uint64_t seed_opt = 0;
  double budget_opt = 0;
  std::string driver_opt, baseline_opt;
  auto* fuzz = app.add_subcommand("fuzz", "run a fuzzing campaign");
  fuzz->add_option("config", campaign_path, "campaign config (JSON)")->required();
  auto* out_opt = fuzz->add_option("--out", out_dir, "output directory");
  auto* seed_flag = fuzz->add_option("--seed", seed_opt, "override rng seed");
  auto* budget_flag =
      fuzz->add_option("--time-budget-secs", budget_opt, "override time budget");
  auto* driver_flag = fuzz->add_option("--driver", driver_opt, "override driver");
  auto* baseline_flag =
      fuzz->add_option("--baseline", baseline_opt, "engine: ga or random");
  fuzz->add_flag("--falsify", fo.falsify, "minimize law robustness instead of coverage");

  // replay
  std::string genome_path, out_trace = "replay_trace.jsonl";
  lawfuzz::ReplayOverrides ro;
  double dt_opt = 0;
  int steps_opt = 0;
  std::string replay_driver;
  auto* replay = app.add_subcommand("replay", "re-simulate a saved genome");
  replay->add_option("genome", genome_path, "genome artifact (JSON)")->required();
  replay->add_option("--out", out_trace, "output trace path");
  auto* rdrv = replay->add_option("--driver", replay_driver, "driver override");
  auto* rdt = replay->add_option("--dt", dt_opt, "must match the recorded dt");
  auto* rsteps = replay->add_option("--steps", steps_opt, "must match the recorded steps");

  CLI11_PARSE(app, argc, argv);

  if (check->parsed()) {
    return lawfuzz::cmd_check(spec_path, trace_path, std::cout, std::cerr);
  }
  if (theta->parsed()) {
    return lawfuzz::cmd_theta(theta_spec, std::cout, std::cerr);
  }
  if (fuzz->parsed()) {
    (void)*out_opt;
    if (*seed_flag) fo.seed = seed_opt;
    if (*budget_flag) fo.time_budget_secs = budget_opt;
    if (*driver_flag) fo.driver = driver_opt;
    if (*baseline_flag) fo.baseline = baseline_opt;
    return lawfuzz::cmd_fuzz(campaign_path, out_dir, fo, std::cout, std::cerr);
  }
  if (replay->parsed()) {
    if (*rdrv) ro.driver = replay_driver;
    if (*rdt) ro.dt = dt_opt;
    if (*rsteps) ro.steps = steps_opt;
    return lawfuzz::cmd_replay(genome_path, out_trace, ro, std::cout, std::cerr);
  }
  return lawfuzz::kExitError;
}
