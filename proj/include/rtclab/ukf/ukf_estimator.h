#ifndef RTCLAB_UKF_UKF_ESTIMATOR_H_
#define RTCLAB_UKF_UKF_ESTIMATOR_H_

#include <cstdint>
#include <deque>
#include <optional>
#include <string>

#include "rtclab/env/estimator.h"
#include "rtclab/ukf/rule_controller.h"
#include "rtclab/ukf/unscented.h"

namespace rtclab {

struct UkfEstimatorConfig {
  UkfState filter;
  RuleControllerState controller;
  // A window whose RTT rose by more than this is treated as link-limited:
  // the filter's sending-rate bound is then the largest of the last
  // `sent_history` estimates. Otherwise the bound is the receive rate.
  double saturation_gradient_ms = 0.0;
  // RTT delta per window, taken across this many windows (2 cancels the
  // 3-frames-per-2-windows pattern of 30 fps media in 50 ms windows).
  int gradient_span = 2;
  int sent_history = 3;
  // Receive rate handed to the controller: mean over this many windows.
  int rate_average_windows = 4;
};

// Reference estimator: UKF over (bandwidth, delay gradient) feeding the
// rule controller. The measurement is the window's receive rate and the
// per-window change in average RTT (zero until enough windows carried RTT
// samples).
class UkfEstimator : public BandwidthEstimator {
 public:
  explicit UkfEstimator(UkfEstimatorConfig cfg = {});

  std::string name() const override { return "ukf"; }
  void Reset() override;
  double Observe(const ObservationWindow& window) override;

  const UkfState& filter() const { return filter_; }
  const RuleControllerState& controller() const { return controller_; }
  uint64_t reinitializations() const { return reinitializations_; }

 private:
  UkfEstimatorConfig cfg_;
  UkfState filter_;
  RuleControllerState controller_;
  std::deque<double> rtt_history_;
  std::deque<double> sent_kbps_;
  std::deque<double> recent_rates_;
  uint64_t reinitializations_ = 0;
};

}  // namespace rtclab

#endif  // RTCLAB_UKF_UKF_ESTIMATOR_H_
