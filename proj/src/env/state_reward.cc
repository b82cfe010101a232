#include "rtclab/env/state_reward.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "rtclab/common/errors.h"

namespace rtclab {

StateVector ScaleState(const ObservationWindow& w,
                       const StateScaling& scaling) {
  StateVector s;
  s.values[0] = w.receive_rate_kbps / scaling.rate_kbps;
  s.values[1] = w.avg_packet_interval_ms / scaling.interval_ms;
  s.values[2] = w.loss_rate;
  s.values[3] = w.avg_rtt_ms / scaling.rtt_ms;
  for (double v : s.values)
    if (!std::isfinite(v))
      throw NumericError("non-finite state component");
  return s;
}

double Reward(const ObservationWindow& w) {
  const double rate_mbps = w.receive_rate_kbps / 1000.0;
  const double rtt_s = w.avg_rtt_ms / 1000.0;
  return 0.6 * std::log(4.0 * rate_mbps + 1.0) - rtt_s - 10.0 * w.loss_rate;
}

Action Action::FromRaw(double raw, ActionMap map) {
  if (!(raw > 0.0 && raw < 1.0))
    throw ValidationError("action raw value " + std::to_string(raw) +
                          " outside (0, 1)");
  Action a;
  a.raw = raw;
  if (map == ActionMap::kLinear) {
    a.mapped_bandwidth_kbps = kMaxKbps * raw;
  } else {
    a.mapped_bandwidth_kbps =
        kLogMinKbps * std::exp(raw * std::log(kMaxKbps / kLogMinKbps));
  }
  return a;
}

Action Action::FromBandwidth(double kbps, ActionMap map) {
  double raw;
  if (map == ActionMap::kLinear) {
    raw = kbps / kMaxKbps;
  } else {
    raw = std::log(std::max(kbps, kLogMinKbps) / kLogMinKbps) /
          std::log(kMaxKbps / kLogMinKbps);
  }
  return FromRaw(std::clamp(raw, kRawEpsilon, 1.0 - kRawEpsilon), map);
}

}  // namespace rtclab
