#include "rtclab/trace/trace.h"

#include <algorithm>
#include <cmath>

#include "rtclab/common/errors.h"

namespace rtclab {

void ValidateLinkParams(const LinkParams& params, const std::string& what) {
  if (!(std::isfinite(params.capacity_kbps) && params.capacity_kbps > 0.0))
    throw ValidationError(what + ": capacity must be > 0");
  if (!(std::isfinite(params.one_way_delay_ms) &&
        params.one_way_delay_ms >= 0.0))
    throw ValidationError(what + ": one-way delay must be >= 0");
  if (!(params.loss_rate >= 0.0 && params.loss_rate <= 1.0))
    throw ValidationError(what + ": loss rate must be in [0, 1]");
}

NetworkTrace::NetworkTrace(std::vector<TraceSegment> segments,
                           int64_t duration_ms)
    : segments_(std::move(segments)), duration_ms_(duration_ms) {
  if (segments_.empty())
    throw ValidationError("trace has no segments");
  if (segments_.front().start_ms != 0)
    throw ValidationError("segment 0: first segment must start at 0 ms");
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const std::string name = "segment " + std::to_string(i);
    ValidateLinkParams(segments_[i].params, name);
    if (i > 0 && segments_[i].start_ms <= segments_[i - 1].start_ms)
      throw ValidationError(name + ": start times must be strictly increasing");
  }
  if (duration_ms_ <= segments_.back().start_ms)
    throw ValidationError("duration must exceed the last segment start");
}

std::size_t NetworkTrace::SegmentIndexAt(double t_ms) const {
  if (!(t_ms >= 0.0 && t_ms < static_cast<double>(duration_ms_)))
    throw RangeError("trace time " + std::to_string(t_ms) +
                     " ms outside [0, " + std::to_string(duration_ms_) + ")");
  // First segment whose start is > t, then step back one.
  auto it = std::upper_bound(
      segments_.begin(), segments_.end(), t_ms,
      [](double t, const TraceSegment& s) {
        return t < static_cast<double>(s.start_ms);
      });
  return static_cast<std::size_t>(std::distance(segments_.begin(), it)) - 1;
}

const LinkParams& NetworkTrace::At(double t_ms) const {
  return segments_[SegmentIndexAt(t_ms)].params;
}

double NetworkTrace::MeanCapacityKbps(double from_ms, double to_ms) const {
  if (!(to_ms > from_ms))
    throw ValidationError("capacity averaging window must be non-empty");
  const double end = std::min(to_ms, static_cast<double>(duration_ms_));
  double weighted = 0.0;
  std::size_t i = SegmentIndexAt(from_ms);
  double t = from_ms;
  while (t < end) {
    const double seg_end =
        i + 1 < segments_.size()
            ? static_cast<double>(segments_[i + 1].start_ms)
            : static_cast<double>(duration_ms_);
    const double upto = std::min(seg_end, end);
    weighted += segments_[i].params.capacity_kbps * (upto - t);
    t = upto;
    ++i;
  }
  // A window running past the trace end keeps the final capacity.
  if (to_ms > end)
    weighted += segments_.back().params.capacity_kbps * (to_ms - end);
  return weighted / (to_ms - from_ms);
}

}  // namespace rtclab
