#include "rtclab/ukf/ukf_estimator.h"

#include <algorithm>

#include "rtclab/common/errors.h"

namespace rtclab {

UkfEstimator::UkfEstimator(UkfEstimatorConfig cfg) : cfg_(std::move(cfg)) {
  ValidateUtParams(cfg_.filter.ut);
  ValidateRuleController(cfg_.controller);
  if (cfg_.sent_history < 1 || cfg_.rate_average_windows < 1 ||
      cfg_.gradient_span < 1)
    throw ValidationError("UKF estimator history lengths must be >= 1");
  Reset();
}

void UkfEstimator::Reset() {
  filter_ = cfg_.filter;
  controller_ = cfg_.controller;
  rtt_history_.clear();
  recent_rates_.clear();
  sent_kbps_.assign(static_cast<std::size_t>(cfg_.sent_history),
                    controller_.estimate_kbps);
  reinitializations_ = 0;
}

double UkfEstimator::Observe(const ObservationWindow& window) {
  double rtt_delta = 0.0;
  if (window.rtt_known) {
    const auto span = static_cast<std::size_t>(cfg_.gradient_span);
    if (rtt_history_.size() == span) {
      rtt_delta = (window.avg_rtt_ms - rtt_history_.front()) /
                  static_cast<double>(span);
      rtt_history_.pop_front();
    }
    rtt_history_.push_back(window.avg_rtt_ms);
  }

  const Eigen::Vector2d z(window.receive_rate_kbps, rtt_delta);
  // Without queue growth the window was sender-limited and only bounds the
  // bandwidth from below.
  const double sent =
      rtt_delta > cfg_.saturation_gradient_ms
          ? *std::max_element(sent_kbps_.begin(), sent_kbps_.end())
          : window.receive_rate_kbps;
  const UkfStepResult r = UkfStep(filter_, z, sent);
  if (r.reinitialized)
    ++reinitializations_;

  recent_rates_.push_back(window.receive_rate_kbps);
  if (recent_rates_.size() > static_cast<std::size_t>(cfg_.rate_average_windows))
    recent_rates_.pop_front();
  double rate = 0.0;
  for (double v : recent_rates_)
    rate += v;
  rate /= static_cast<double>(recent_rates_.size());

  const double est = RuleControl(
      controller_, {r.bandwidth_kbps, r.delay_gradient_ms, rate});
  sent_kbps_.pop_front();
  sent_kbps_.push_back(est);
  return est;
}

}  // namespace rtclab
