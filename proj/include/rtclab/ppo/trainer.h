#ifndef RTCLAB_PPO_TRAINER_H_
#define RTCLAB_PPO_TRAINER_H_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rtclab/env/rtc_env.h"
#include "rtclab/eval/evaluate.h"
#include "rtclab/nn/policy.h"
#include "rtclab/ppo/ppo_config.h"
#include "rtclab/ppo/update.h"

namespace rtclab {

inline constexpr const char* kTrainLogHeader =
    "iteration,steps,mean_reward,policy_loss,value_loss,entropy,clip_fraction";

struct TrainConfig {
  PpoConfig ppo;
  // Template for training episodes; trace and seed are drawn per episode.
  EnvConfig env;
  int iterations = 100;
  // Stop before an iteration would exceed this many environment steps;
  // 0 disables the budget.
  int64_t max_env_steps = 0;
  // Held-out traces for best-by-eval checkpointing. Without them the final
  // parameters are kept.
  std::vector<TraceEntry> eval_traces;
  int eval_interval = 10;
  uint64_t eval_seed = 1;
  // Empty paths disable the corresponding output.
  std::string checkpoint_path;
  std::string log_path;
  // Seeds policy initialization, environments and minibatch shuffling.
  uint64_t seed = 1;
};

// One row per iteration. Iteration k collects with the parameters after k
// updates; mean_reward is the per-step mean over that collection and the
// loss columns describe the update that follows it.
struct TrainLogRow {
  int iteration = 0;
  int64_t steps = 0;  // cumulative environment steps after collection
  double mean_reward = 0.0;
  PpoDiagnostics diag;
};

void WriteTrainLogRow(std::ostream& out, const TrainLogRow& row);

struct TrainResult {
  nn::PolicyParams final_params;
  nn::PolicyParams best_params;
  // Mean eval reward of best_params, when eval traces were given.
  std::optional<double> best_eval_reward;
  std::vector<TrainLogRow> log;
  int64_t env_steps = 0;
};

using TrainProgress = std::function<void(const TrainLogRow&)>;

// collect -> GAE -> update for cfg.iterations. Writes the checkpoint (best
// by eval reward, initial parameters for zero iterations) and the CSV log.
// A non-finite loss flushes the log and throws NumericError.
TrainResult Train(const TrainConfig& cfg, std::span<const TraceEntry> corpus,
                  const TrainProgress& progress = {});

// Deterministic policy evaluation used for checkpoint selection.
Evaluation EvaluatePolicy(const nn::PolicyParams& params,
                          const std::vector<TraceEntry>& traces,
                          const EnvConfig& env, uint64_t seed, int workers);

}  // namespace rtclab

#endif  // RTCLAB_PPO_TRAINER_H_
