#ifndef RTCLAB_UKF_RULE_CONTROLLER_H_
#define RTCLAB_UKF_RULE_CONTROLLER_H_

namespace rtclab {

enum class RateMode { kIncrease, kHold, kDecrease };

// Delay-gradient threshold controller.
//   gradient > overuse      -> decrease: min(est * down, down * receive rate);
//                              from decrease or hold only the receive rate
//                              cap is re-applied
//   gradient < underuse     -> increase: est * up
//   otherwise               -> decrease turns into hold, hold into increase
//                              (estimate unchanged on the transition step),
//                              increase keeps increasing.
// The result is clamped to [10, 8000] kb/s and never exceeds the filter's
// bandwidth mean.
struct RuleControllerState {
  RateMode mode = RateMode::kIncrease;
  double overuse_threshold_ms = 2.0;
  double underuse_threshold_ms = -2.0;
  double up_factor = 1.05;
  double down_factor = 0.85;
  double estimate_kbps = 300.0;
};

void ValidateRuleController(const RuleControllerState& ctrl);

struct RuleInputs {
  double ukf_bandwidth_kbps = 0.0;
  double delay_gradient_ms = 0.0;
  double receive_rate_kbps = 0.0;
};

double RuleControl(RuleControllerState& ctrl, const RuleInputs& in);

}  // namespace rtclab

#endif  // RTCLAB_UKF_RULE_CONTROLLER_H_
