#ifndef RTCLAB_NETSIM_SIM_TYPES_H_
#define RTCLAB_NETSIM_SIM_TYPES_H_

#include <cmath>
#include <cstdint>
#include <optional>
#include <string_view>

namespace rtclab {

// Simulation time in integer microseconds.
using SimTime = int64_t;

constexpr SimTime kUsPerMs = 1000;

inline SimTime MsToUs(double ms) { return std::llround(ms * 1000.0); }
// Rounds up so that durations derived from ms never undershoot.
inline SimTime MsToUsCeil(double ms) {
  const double us = ms * 1000.0;
  const double r = std::round(us);
  if (std::abs(us - r) < 1e-6)
    return static_cast<SimTime>(r);
  return static_cast<SimTime>(std::ceil(us));
}
inline double UsToMs(SimTime us) { return static_cast<double>(us) / 1000.0; }

enum class Flow : uint8_t { kMedia = 0, kFeedback = 1, kCross = 2 };
inline constexpr int kNumFlows = 3;

std::string_view FlowName(Flow flow);

struct SimPacket {
  uint64_t id = 0;
  Flow flow = Flow::kMedia;
  uint32_t size_bytes = 0;
  SimTime send_time = 0;
  std::optional<SimTime> arrival_time;
  // Opaque handle for the endpoint layer (e.g. index of a feedback message).
  uint64_t payload_tag = 0;
};

enum class DropReason : uint8_t { kLoss, kQueueFull };

}  // namespace rtclab

#endif  // RTCLAB_NETSIM_SIM_TYPES_H_
