#ifndef RTCLAB_PPO_POLICY_ESTIMATOR_H_
#define RTCLAB_PPO_POLICY_ESTIMATOR_H_

#include <memory>
#include <string>

#include "rtclab/env/estimator.h"
#include "rtclab/env/state_reward.h"
#include "rtclab/nn/policy.h"

namespace rtclab {

// Deterministic rollout of a trained policy: the action is the Gaussian
// mean pushed through the sigmoid, the GRU state is carried across windows
// and cleared on Reset().
class PolicyEstimator : public BandwidthEstimator {
 public:
  PolicyEstimator(std::shared_ptr<const nn::PolicyParams> params,
                  StateScaling scaling = {},
                  ActionMap map = ActionMap::kLinear);

  std::string name() const override { return "policy"; }
  void Reset() override;
  double Observe(const ObservationWindow& window) override;

 private:
  std::shared_ptr<const nn::PolicyParams> params_;
  StateScaling scaling_;
  ActionMap map_;
  nn::Tensor2 hidden_;
};

}  // namespace rtclab

#endif  // RTCLAB_PPO_POLICY_ESTIMATOR_H_
