#ifndef RTCLAB_NETSIM_CROSS_TRAFFIC_H_
#define RTCLAB_NETSIM_CROSS_TRAFFIC_H_

#include <cstdint>
#include <string_view>

namespace rtclab {

enum class CrossTrafficMode : uint8_t { kOff, kConstant, kAimd };

CrossTrafficMode ParseCrossTrafficMode(std::string_view name);

// Competing flow sharing the media bottleneck. In AIMD mode `rate_kbps` is
// the congestion window expressed as a rate.
struct CrossTrafficModel {
  CrossTrafficMode mode = CrossTrafficMode::kOff;
  double rate_kbps = 0.0;
  double aimd_increase_kbps = 10.0;  // per loss-free feedback interval
  double aimd_backoff = 0.5;
  double aimd_min_kbps = 10.0;
  double aimd_max_kbps = 8000.0;
};

struct CrossFeedback {
  uint64_t delivered = 0;
  uint64_t lost = 0;
};

// Bytes the cross source offers over the next `interval_ms`. AIMD state is
// updated from `feedback` first. Throws ValidationError for interval <= 0.
double CrossOfferedLoad(CrossTrafficModel& model, double interval_ms,
                        const CrossFeedback& feedback);

}  // namespace rtclab

#endif  // RTCLAB_NETSIM_CROSS_TRAFFIC_H_
