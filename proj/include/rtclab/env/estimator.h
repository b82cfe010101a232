#ifndef RTCLAB_ENV_ESTIMATOR_H_
#define RTCLAB_ENV_ESTIMATOR_H_

#include <string>

#include "rtclab/rtc/receiver.h"

namespace rtclab {

// Receiver-side bandwidth estimator: consumes the statistics of the window
// that just closed and returns the estimate (kb/s) to feed back next.
class BandwidthEstimator {
 public:
  virtual ~BandwidthEstimator() = default;
  virtual std::string name() const = 0;
  // Called at the start of every episode.
  virtual void Reset() = 0;
  virtual double Observe(const ObservationWindow& window) = 0;
};

}  // namespace rtclab

#endif  // RTCLAB_ENV_ESTIMATOR_H_
