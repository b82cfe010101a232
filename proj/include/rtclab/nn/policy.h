#ifndef RTCLAB_NN_POLICY_H_
#define RTCLAB_NN_POLICY_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rtclab/nn/graph.h"
#include "rtclab/nn/gru.h"
#include "rtclab/nn/tensor.h"

namespace rtclab::nn {

inline constexpr double kMeanEpsilon = 1e-6;

struct PolicyConfig {
  std::size_t input_size = 4;
  std::size_t trunk_size = 64;
  std::size_t hidden_size = 64;
  double leaky_slope = 0.01;
  double init_log_std = -1.0;
  // Multiplier on the fan-in bound for the actor head weights.
  double actor_init_gain = 0.1;
  uint64_t seed = 1;
};

// Shared-trunk recurrent actor-critic:
//   trunk:  linear(in -> trunk) + leaky ReLU + GRU(trunk -> hidden)
//   actor:  linear(hidden -> 1), sigmoid gives the action mean
//   critic: linear(hidden -> 1)
// plus one learnable log standard deviation for the pre-sigmoid Gaussian.
struct PolicyParams {
  Parameter trunk_w;
  Parameter trunk_b;
  GruCellParams gru;
  Parameter actor_w;
  Parameter actor_b;
  Parameter log_std;
  Parameter critic_w;
  Parameter critic_b;
  double leaky_slope = 0.01;

  static PolicyParams Init(const PolicyConfig& cfg);

  std::size_t input_size() const { return trunk_w.value.rows(); }
  std::size_t hidden_size() const { return gru.hidden_size(); }

  // Fixed order; also the checkpoint order.
  std::vector<Parameter*> All();
  std::vector<const Parameter*> All() const;
  void ZeroGrad();
  // Throws ValidationError naming the offending tensor.
  void Validate() const;
};

struct PolicyOutput {
  double mean = 0.5;       // sigmoid(pre_mean), clamped to [eps, 1 - eps]
  double pre_mean = 0.0;
  double log_std = 0.0;
  double value = 0.0;
};

struct PolicyBatchOutput {
  std::vector<PolicyOutput> rows;
  Tensor2 hidden;  // B x hidden
};

// Single-state convenience; h is 1 x hidden and is replaced by h'.
PolicyOutput PolicyForward(const PolicyParams& p, std::span<const double> state,
                           Tensor2& h);

// states: B x in, h: B x hidden.
PolicyBatchOutput PolicyForwardBatch(const PolicyParams& p,
                                     const Tensor2& states, const Tensor2& h);

Tensor2 InitialHidden(const PolicyParams& p, std::size_t batch = 1);

// Graph handles for every policy parameter.
struct PolicyVars {
  Var trunk_w, trunk_b;
  GruVars gru;
  Var actor_w, actor_b, log_std, critic_w, critic_b;
  double leaky_slope;

  static PolicyVars Bind(Graph& g, PolicyParams& p);
};

struct PolicyStepVars {
  Var pre_mean;  // B x 1
  Var value;     // B x 1
  Var hidden;    // B x hidden
};

PolicyStepVars PolicyStep(Graph& g, const PolicyVars& p, Var states, Var h);

// log N(u; mu, sigma) for the pre-sigmoid sample u.
double GaussianLogProb(double u, double mu, double log_std);
double GaussianEntropy(double log_std);

}  // namespace rtclab::nn

#endif  // RTCLAB_NN_POLICY_H_
