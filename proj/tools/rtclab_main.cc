#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "rtclab/cli/commands.h"
#include "rtclab/cli/settings.h"

namespace {

void AddCommon(CLI::App* cmd, rtclab::cli::RunConfig& run) {
  cmd->add_option("--seed", run.seed, "Seed for all randomness")
      ->capture_default_str();
  cmd->add_option("--out", run.out_dir, "Output directory")
      ->capture_default_str();
  cmd->add_option("--set", run.overrides,
                  "Configuration override key=value (repeatable)");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace rtclab::cli;
  RunConfig run;
  bool list_keys = false;

  CLI::App app{"rtclab: simulated RTC bandwidth estimation laboratory"};
  app.require_subcommand(0, 1);
  app.add_flag("--list-keys", list_keys, "Print the keys accepted by --set");

  CLI::App* gen = app.add_subcommand("gen-traces", "Generate random traces");
  AddCommon(gen, run);
  gen->add_option("--count", run.count, "Number of traces")
      ->capture_default_str();

  CLI::App* train = app.add_subcommand("train", "Train a policy with PPO");
  AddCommon(train, run);
  train->add_option("--traces", run.traces_dir, "Training trace directory")
      ->required();
  train->add_option("--eval-traces", run.eval_traces_dir,
                    "Held-out traces for best-checkpoint selection");
  train->add_option("--checkpoint", run.checkpoint,
                    "Checkpoint to write (default <out>/policy.ckpt)");

  CLI::App* eval = app.add_subcommand("eval", "Evaluate one estimator");
  AddCommon(eval, run);
  eval->add_option("--traces", run.traces_dir, "Trace directory")->required();
  eval->add_option("--checkpoint", run.checkpoint, "Policy checkpoint");
  eval->add_option("--estimator", run.estimator,
                   "ukf, policy, oracle or constant")
      ->capture_default_str();
  eval->add_flag("--emit-series", run.emit_series, "Write per-trace series");

  CLI::App* compare = app.add_subcommand("compare", "Paired A/B comparison");
  AddCommon(compare, run);
  compare->add_option("--traces", run.traces_dir, "Trace directory")
      ->required();
  compare->add_option("--checkpoint", run.checkpoint, "Policy checkpoint");
  compare->add_option("--a", run.estimator_a, "First estimator")
      ->capture_default_str();
  compare->add_option("--b", run.estimator_b, "Second estimator")
      ->capture_default_str();
  compare->add_flag("--emit-series", run.emit_series,
                    "Write per-trace series for both estimators");

  CLI::App* replay = app.add_subcommand("replay", "Per-step series of one run");
  AddCommon(replay, run);
  replay->add_option("--trace", run.trace_file, "Trace file")->required();
  replay->add_option("--checkpoint", run.checkpoint, "Policy checkpoint");
  replay->add_option("--estimator", run.estimator,
                     "ukf, policy, oracle or constant")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  if (list_keys) {
    for (const std::string& k : OverrideKeys())
      std::cout << k << '\n';
    return kExitOk;
  }
  if (app.get_subcommands().empty()) {
    std::cerr << app.help();
    return kExitUsage;
  }

  return GuardedRun(
      [&] {
        Settings settings;
        ApplyOverrides(settings, run.overrides);
        if (gen->parsed())
          CmdGenTraces(run, settings, std::cout);
        else if (train->parsed())
          CmdTrain(run, settings, std::cout);
        else if (eval->parsed())
          CmdEval(run, settings, std::cout);
        else if (compare->parsed())
          CmdCompare(run, settings, std::cout);
        else if (replay->parsed())
          CmdReplay(run, settings, std::cout);
      },
      std::cerr);
}
