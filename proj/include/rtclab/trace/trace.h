#ifndef RTCLAB_TRACE_TRACE_H_
#define RTCLAB_TRACE_TRACE_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rtclab {

// Parameters of the bottleneck link while one trace segment is in force.
struct LinkParams {
  double capacity_kbps = 0.0;
  double one_way_delay_ms = 0.0;
  double loss_rate = 0.0;

  friend bool operator==(const LinkParams&, const LinkParams&) = default;
};

// Throws ValidationError when a field is out of its domain. `what` names the
// owner in the message (e.g. "segment 3").
void ValidateLinkParams(const LinkParams& params, const std::string& what);

struct TraceSegment {
  int64_t start_ms = 0;
  LinkParams params;

  friend bool operator==(const TraceSegment&, const TraceSegment&) = default;
};

// Piecewise-constant schedule of link parameters. Segment i is in force on
// [start_i, start_{i+1}) and the last one on [start_last, duration).
class NetworkTrace {
 public:
  // Validates: non-empty, first start 0, strictly increasing starts,
  // duration > last start, every LinkParams valid.
  NetworkTrace(std::vector<TraceSegment> segments, int64_t duration_ms);

  const std::vector<TraceSegment>& segments() const { return segments_; }
  int64_t duration_ms() const { return duration_ms_; }

  // Throws RangeError unless 0 <= t_ms < duration.
  const LinkParams& At(double t_ms) const;

  // Index of the segment in force at t_ms (same domain as At()).
  std::size_t SegmentIndexAt(double t_ms) const;

  // Mean capacity over [from_ms, to_ms), integrating across boundaries.
  double MeanCapacityKbps(double from_ms, double to_ms) const;

  friend bool operator==(const NetworkTrace&, const NetworkTrace&) = default;

 private:
  std::vector<TraceSegment> segments_;
  int64_t duration_ms_;
};

// Text format:
//   rtctrace v1 duration_ms=<int>
//   <start_ms> <capacity_kbps> <owd_ms> <loss_rate>
//   ...
// '#' starts a comment; blank lines are ignored.
NetworkTrace ParseTrace(std::string_view text);
std::string SerializeTrace(const NetworkTrace& trace);

NetworkTrace ReadTraceFile(const std::string& path);
void WriteTraceFile(const std::string& path, const NetworkTrace& trace);

template <typename T>
struct Range {
  T min;
  T max;
};

struct TraceGenConfig {
  Range<double> capacity_kbps{300.0, 8000.0};
  Range<double> delay_ms{10.0, 100.0};
  Range<double> loss{0.0, 0.02};
  Range<double> segment_duration_s{2.0, 15.0};
  double duration_s = 60.0;
  uint64_t seed = 1;
};

void ValidateTraceGenConfig(const TraceGenConfig& cfg);

// Capacity is log-uniform, delay and loss uniform, segment lengths uniform.
// The final segment is truncated so the trace ends exactly at duration.
NetworkTrace SampleTrace(const TraceGenConfig& cfg);

}  // namespace rtclab

#endif  // RTCLAB_TRACE_TRACE_H_
