#ifndef RTCLAB_PPO_UPDATE_H_
#define RTCLAB_PPO_UPDATE_H_

#include <cstdint>
#include <random>
#include <vector>

#include "rtclab/nn/adam.h"
#include "rtclab/nn/graph.h"
#include "rtclab/nn/policy.h"
#include "rtclab/ppo/gae.h"
#include "rtclab/ppo/ppo_config.h"
#include "rtclab/ppo/rollout.h"

namespace rtclab {

struct PpoDiagnostics {
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double clip_fraction = 0.0;
  double approx_kl = 0.0;
  double grad_norm = 0.0;
  int minibatches = 0;
  bool aborted = false;  // non-finite loss: parameters left untouched
};

// A contiguous run of steps from one environment.
struct Chunk {
  std::size_t env = 0;
  std::size_t start = 0;
  std::size_t length = 0;
};

// Splits every environment's rollout into chunk_len pieces.
std::vector<Chunk> MakeChunks(const RolloutBuffer& buffer,
                              std::size_t chunk_len);

// Inputs for the loss of one minibatch, laid out step-major: row
// t * chunks + c is step t of chunk c.
struct MinibatchTargets {
  std::vector<double> pre_action;
  std::vector<double> old_log_prob;
  std::vector<double> advantage;
  std::vector<double> value_target;
};

struct PpoLossVars {
  nn::Var total;
  nn::Var policy_loss;
  nn::Var value_loss;
  nn::Var entropy;
  nn::Var ratio;  // N x 1
};

// Unrolls the policy over the chunks (hidden reset after done steps) and
// builds the clipped-surrogate loss:
//   total = -mean(min(rho A, clip(rho, 1-eps, 1+eps) A))
//           + c_v mean((V - target)^2) - c_e entropy
PpoLossVars BuildPpoLoss(nn::Graph& g, const nn::PolicyVars& vars,
                         const RolloutBuffer& buffer,
                         const std::vector<Chunk>& chunks,
                         const MinibatchTargets& targets,
                         const PpoConfig& cfg);

// Epochs over shuffled chunk minibatches with gradient clipping and Adam.
// A non-finite loss restores the parameters and optimizer from before the
// call and sets `aborted`.
PpoDiagnostics PpoUpdate(nn::PolicyParams& params, nn::Adam& adam,
                         const RolloutBuffer& buffer, const GaeResult& gae,
                         const PpoConfig& cfg, std::mt19937_64& rng);

}  // namespace rtclab

#endif  // RTCLAB_PPO_UPDATE_H_
