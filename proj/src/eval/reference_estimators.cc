#include "rtclab/eval/reference_estimators.h"

#include <algorithm>

#include "rtclab/common/errors.h"

namespace rtclab {

CapacityOracleEstimator::CapacityOracleEstimator(
    std::shared_ptr<const NetworkTrace> trace, double step_len_ms, double scale)
    : trace_(std::move(trace)), step_len_ms_(step_len_ms), scale_(scale) {
  if (!trace_)
    throw ValidationError("oracle estimator needs a trace");
  if (!(step_len_ms_ > 0.0) || !(scale_ > 0.0))
    throw ValidationError("oracle step length and scale must be > 0");
}

double CapacityOracleEstimator::Observe(const ObservationWindow&) {
  const double duration = static_cast<double>(trace_->duration_ms());
  const double from =
      std::min(static_cast<double>(next_window_) * step_len_ms_,
               duration - step_len_ms_);
  const double to = std::min(from + step_len_ms_, duration);
  ++next_window_;
  return scale_ * trace_->MeanCapacityKbps(std::max(0.0, from), to);
}

}  // namespace rtclab
