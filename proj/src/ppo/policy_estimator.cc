#include "rtclab/ppo/policy_estimator.h"

#include "rtclab/common/errors.h"

namespace rtclab {

PolicyEstimator::PolicyEstimator(
    std::shared_ptr<const nn::PolicyParams> params, StateScaling scaling,
    ActionMap map)
    : params_(std::move(params)), scaling_(scaling), map_(map) {
  if (!params_)
    throw ValidationError("policy estimator needs parameters");
  params_->Validate();
  Reset();
}

void PolicyEstimator::Reset() { hidden_ = nn::InitialHidden(*params_); }

double PolicyEstimator::Observe(const ObservationWindow& window) {
  const StateVector s = ScaleState(window, scaling_);
  const nn::PolicyOutput out = nn::PolicyForward(*params_, s.values, hidden_);
  return Action::FromRaw(out.mean, map_).mapped_bandwidth_kbps;
}

}  // namespace rtclab
