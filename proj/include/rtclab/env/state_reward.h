#ifndef RTCLAB_ENV_STATE_REWARD_H_
#define RTCLAB_ENV_STATE_REWARD_H_

#include <array>
#include <cstddef>

#include "rtclab/rtc/receiver.h"

namespace rtclab {

// Scaled policy input: [receive rate, packet interval, loss, RTT].
struct StateVector {
  static constexpr std::size_t kSize = 4;
  std::array<double, kSize> values{};

  double receive_rate() const { return values[0]; }
  double interval() const { return values[1]; }
  double loss_rate() const { return values[2]; }
  double rtt() const { return values[3]; }

  friend bool operator==(const StateVector&, const StateVector&) = default;
};

struct StateScaling {
  double rate_kbps = 1000.0;   // kb/s -> Mb/s
  double interval_ms = 100.0;
  double rtt_ms = 1000.0;      // ms -> s
};

StateVector ScaleState(const ObservationWindow& w,
                       const StateScaling& scaling = {});

// 0.6 ln(4R + 1) - D - 10L with R in Mb/s, D in s, L a fraction.
double Reward(const ObservationWindow& w);

enum class ActionMap { kLinear, kLog };

// Policy output in (0, 1) and the bandwidth it stands for.
struct Action {
  double raw = 0.5;
  double mapped_bandwidth_kbps = 4000.0;

  static constexpr double kMaxKbps = 8000.0;
  static constexpr double kLogMinKbps = 10.0;
  // Clamp keeping raw strictly inside (0, 1).
  static constexpr double kRawEpsilon = 1e-6;

  // Throws ValidationError unless 0 < raw < 1.
  static Action FromRaw(double raw, ActionMap map = ActionMap::kLinear);
  // Inverse map; the raw value is clamped into [eps, 1 - eps].
  static Action FromBandwidth(double kbps, ActionMap map = ActionMap::kLinear);
};

}  // namespace rtclab

#endif  // RTCLAB_ENV_STATE_REWARD_H_
