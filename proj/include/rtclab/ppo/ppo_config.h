#ifndef RTCLAB_PPO_PPO_CONFIG_H_
#define RTCLAB_PPO_PPO_CONFIG_H_

#include "rtclab/nn/adam.h"
#include "rtclab/nn/policy.h"

namespace rtclab {

struct PpoConfig {
  double gamma = 0.99;
  double gae_lambda = 0.95;
  double clip_epsilon = 0.2;
  int epochs = 4;
  // Recurrent minibatches are contiguous chunks of this many steps.
  int chunk_len = 32;
  int minibatch_chunks = 2;
  // Steps collected per environment per iteration.
  int horizon = 512;
  int num_envs = 8;
  int workers = 8;
  double value_coef = 0.5;
  double entropy_coef = 0.01;
  double max_grad_norm = 0.5;
  bool normalize_advantages = true;
  // Divide rewards by the running std of discounted returns before GAE.
  bool scale_rewards = true;
  nn::AdamConfig adam;
  nn::PolicyConfig policy;
};

// Throws ValidationError on non-positive sizes, horizon not a multiple of
// chunk_len, or coefficients outside their domains.
void ValidatePpoConfig(const PpoConfig& cfg);

}  // namespace rtclab

#endif  // RTCLAB_PPO_PPO_CONFIG_H_
