#ifndef RTCLAB_PPO_ROLLOUT_H_
#define RTCLAB_PPO_ROLLOUT_H_

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "rtclab/env/rtc_env.h"
#include "rtclab/eval/evaluate.h"
#include "rtclab/nn/policy.h"

namespace rtclab {

// One environment plus the recurrent state carried across iterations.
struct EnvSlot {
  RtcEnv env;
  nn::Tensor2 hidden;  // 1 x H, input hidden for the next step
  std::mt19937_64 rng;
  double episode_reward = 0.0;
  int64_t episode_steps = 0;
};

struct RolloutContext {
  std::span<const TraceEntry> corpus;
  EnvConfig env_template;  // trace and seed are drawn per episode
};

// Seeds slot i deterministically from (seed, i) and starts its first
// episode on a corpus trace drawn with the slot's own generator.
std::vector<EnvSlot> MakeEnvSlots(const RolloutContext& ctx,
                                  const nn::PolicyParams& policy, int count,
                                  uint64_t seed);

// Transitions of one environment, in time order.
struct EnvRollout {
  nn::Tensor2 states;  // T x in
  nn::Tensor2 hidden;  // T x H, hidden fed into step t
  std::vector<double> pre_action;  // Gaussian sample u, action = sigmoid(u)
  std::vector<double> log_prob;
  std::vector<double> value;
  std::vector<double> reward;
  std::vector<uint8_t> done;  // episode ended after step t
  double bootstrap_value = 0.0;  // V of the state after the last step

  std::size_t size() const { return reward.size(); }
};

struct RolloutBuffer {
  std::vector<EnvRollout> envs;
  // Completed episodes during collection: mean per-step reward each.
  std::vector<double> episode_mean_rewards;

  std::size_t transitions() const;
  double MeanReward() const;
};

// Runs `horizon` steps in every slot with a fixed policy snapshot. Slots
// are split into `workers` contiguous groups; each slot draws from its own
// generator, so the result does not depend on the worker count. The hidden
// state is carried within an episode and reset to zero at episode end.
// Errors are rethrown with the environment index.
RolloutBuffer CollectRollouts(const nn::PolicyParams& policy,
                              std::span<EnvSlot> slots,
                              const RolloutContext& ctx, int horizon,
                              int workers = 1);

// Action drawn for a pre-sigmoid mean: u ~ N(mu, sigma), action raw value
// sigmoid(u) clamped into (0, 1).
double SquashAction(double u);

}  // namespace rtclab

#endif  // RTCLAB_PPO_ROLLOUT_H_
