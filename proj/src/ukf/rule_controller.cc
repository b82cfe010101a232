#include "rtclab/ukf/rule_controller.h"

#include <algorithm>
#include <cmath>

#include "rtclab/common/errors.h"
#include "rtclab/rtc/sender.h"

namespace rtclab {

void ValidateRuleController(const RuleControllerState& ctrl) {
  if (!(ctrl.down_factor < 1.0 && 1.0 < ctrl.up_factor &&
        ctrl.down_factor > 0.0))
    throw ValidationError("rule controller needs 0 < down < 1 < up");
  if (!(ctrl.underuse_threshold_ms <= ctrl.overuse_threshold_ms))
    throw ValidationError("underuse threshold must not exceed overuse");
}

double RuleControl(RuleControllerState& ctrl, const RuleInputs& in) {
  if (!(std::isfinite(in.ukf_bandwidth_kbps) &&
        std::isfinite(in.delay_gradient_ms) &&
        std::isfinite(in.receive_rate_kbps)))
    throw ValidationError("rule controller inputs must be finite");

  double est = ctrl.estimate_kbps;
  if (in.delay_gradient_ms > ctrl.overuse_threshold_ms) {
    if (ctrl.mode == RateMode::kIncrease)
      est *= ctrl.down_factor;
    ctrl.mode = RateMode::kDecrease;
    if (in.receive_rate_kbps > 0.0)
      est = std::min(est, ctrl.down_factor * in.receive_rate_kbps);
  } else if (in.delay_gradient_ms < ctrl.underuse_threshold_ms) {
    ctrl.mode = RateMode::kIncrease;
    est *= ctrl.up_factor;
  } else {
    switch (ctrl.mode) {
      case RateMode::kDecrease:
        ctrl.mode = RateMode::kHold;
        break;
      case RateMode::kHold:
        ctrl.mode = RateMode::kIncrease;
        break;
      case RateMode::kIncrease:
        est *= ctrl.up_factor;
        break;
    }
  }
  est = std::min(est, in.ukf_bandwidth_kbps);
  est = std::clamp(est, kMinBitrateKbps, kMaxBitrateKbps);
  ctrl.estimate_kbps = est;
  return est;
}

}  // namespace rtclab
