#include "rtclab/netsim/cross_traffic.h"

#include <algorithm>
#include <string>

#include "rtclab/common/errors.h"

namespace rtclab {

CrossTrafficMode ParseCrossTrafficMode(std::string_view name) {
  if (name == "off")
    return CrossTrafficMode::kOff;
  if (name == "constant")
    return CrossTrafficMode::kConstant;
  if (name == "aimd")
    return CrossTrafficMode::kAimd;
  throw ValidationError("unknown cross traffic mode '" + std::string(name) +
                        "' (expected off|constant|aimd)");
}

double CrossOfferedLoad(CrossTrafficModel& model, double interval_ms,
                        const CrossFeedback& feedback) {
  if (!(interval_ms > 0.0))
    throw ValidationError("cross traffic interval must be > 0");
  switch (model.mode) {
    case CrossTrafficMode::kOff:
      return 0.0;
    case CrossTrafficMode::kConstant:
      break;
    case CrossTrafficMode::kAimd:
      if (feedback.lost > 0) {
        model.rate_kbps *= model.aimd_backoff;
      } else if (feedback.delivered > 0) {
        model.rate_kbps += model.aimd_increase_kbps;
      }
      model.rate_kbps =
          std::clamp(model.rate_kbps, model.aimd_min_kbps, model.aimd_max_kbps);
      break;
  }
  // kbit/s * ms = bits; / 8 = bytes
  return std::max(0.0, model.rate_kbps) * interval_ms / 8.0;
}

}  // namespace rtclab
