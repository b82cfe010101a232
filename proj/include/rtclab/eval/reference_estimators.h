#ifndef RTCLAB_EVAL_REFERENCE_ESTIMATORS_H_
#define RTCLAB_EVAL_REFERENCE_ESTIMATORS_H_

#include <memory>
#include <string>

#include "rtclab/env/estimator.h"
#include "rtclab/trace/trace.h"

namespace rtclab {

// Reports the true mean capacity of the window the estimate will govern.
// Assumes it is driven by RunEpisode: the first Observe() follows the
// warm-up window.
class CapacityOracleEstimator : public BandwidthEstimator {
 public:
  CapacityOracleEstimator(std::shared_ptr<const NetworkTrace> trace,
                          double step_len_ms = 50.0, double scale = 1.0);

  std::string name() const override { return "oracle"; }
  void Reset() override { next_window_ = 1; }
  double Observe(const ObservationWindow& window) override;

 private:
  std::shared_ptr<const NetworkTrace> trace_;
  double step_len_ms_;
  double scale_;
  int64_t next_window_ = 1;
};

class ConstantEstimator : public BandwidthEstimator {
 public:
  explicit ConstantEstimator(double kbps) : kbps_(kbps) {}
  std::string name() const override { return "constant"; }
  void Reset() override {}
  double Observe(const ObservationWindow&) override { return kbps_; }

 private:
  double kbps_;
};

}  // namespace rtclab

#endif  // RTCLAB_EVAL_REFERENCE_ESTIMATORS_H_
