#ifndef RTCLAB_NN_ADAM_H_
#define RTCLAB_NN_ADAM_H_

#include <cstdint>
#include <vector>

#include "rtclab/nn/graph.h"

namespace rtclab::nn {

struct AdamConfig {
  double lr = 3e-5;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Bias-corrected Adam over a fixed list of parameters; reads Parameter::grad.
class Adam {
 public:
  Adam(AdamConfig cfg, std::vector<Parameter*> params);

  void Step();

  // Rebinds to a structurally identical parameter list (e.g. after the
  // owning object moved). Moments are kept.
  void Rebind(std::vector<Parameter*> params);

  int64_t steps() const { return steps_; }
  const AdamConfig& config() const { return cfg_; }
  const std::vector<Tensor2>& first_moments() const { return m_; }
  const std::vector<Tensor2>& second_moments() const { return v_; }

 private:
  AdamConfig cfg_;
  std::vector<Parameter*> params_;
  std::vector<Tensor2> m_;
  std::vector<Tensor2> v_;
  int64_t steps_ = 0;
};

// Scales all gradients so their global L2 norm is at most max_norm.
// Returns the norm before clipping.
double ClipGradNorm(const std::vector<Parameter*>& params, double max_norm);

}  // namespace rtclab::nn

#endif  // RTCLAB_NN_ADAM_H_
