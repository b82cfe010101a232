#include <algorithm>
#include <cmath>
#include <random>

#include "rtclab/common/errors.h"
#include "rtclab/common/random.h"
#include "rtclab/trace/trace.h"

namespace rtclab {
namespace {

double Uniform(std::mt19937_64& rng, const Range<double>& r) {
  return r.min + (r.max - r.min) * UnitUniform(rng);
}

double LogUniform(std::mt19937_64& rng, const Range<double>& r) {
  const double lo = std::log(r.min);
  const double hi = std::log(r.max);
  return std::exp(lo + (hi - lo) * UnitUniform(rng));
}

void CheckRange(const Range<double>& r, const char* name) {
  if (!(std::isfinite(r.min) && std::isfinite(r.max) && r.min <= r.max))
    throw ValidationError(std::string("trace generator: ") + name +
                          " range must satisfy min <= max");
}

}  // namespace

void ValidateTraceGenConfig(const TraceGenConfig& cfg) {
  CheckRange(cfg.capacity_kbps, "capacity");
  CheckRange(cfg.delay_ms, "delay");
  CheckRange(cfg.loss, "loss");
  CheckRange(cfg.segment_duration_s, "segment duration");
  if (cfg.capacity_kbps.min <= 0.0)
    throw ValidationError("trace generator: capacity must be > 0");
  if (cfg.delay_ms.min < 0.0)
    throw ValidationError("trace generator: delay must be >= 0");
  if (cfg.loss.min < 0.0 || cfg.loss.max > 1.0)
    throw ValidationError("trace generator: loss must be within [0, 1]");
  if (cfg.segment_duration_s.min < 0.001)
    throw ValidationError("trace generator: segments must last >= 1 ms");
  if (!(cfg.duration_s >= 0.001))
    throw ValidationError("trace generator: duration must be >= 1 ms");
}

NetworkTrace SampleTrace(const TraceGenConfig& cfg) {
  ValidateTraceGenConfig(cfg);
  std::mt19937_64 rng(cfg.seed);
  const auto duration_ms = static_cast<int64_t>(std::llround(cfg.duration_s * 1000.0));

  std::vector<TraceSegment> segments;
  int64_t start = 0;
  while (start < duration_ms) {
    TraceSegment seg;
    seg.start_ms = start;
    seg.params.capacity_kbps = LogUniform(rng, cfg.capacity_kbps);
    seg.params.one_way_delay_ms = Uniform(rng, cfg.delay_ms);
    seg.params.loss_rate = Uniform(rng, cfg.loss);
    segments.push_back(seg);
    const auto len = std::max<int64_t>(
        1, std::llround(Uniform(rng, cfg.segment_duration_s) * 1000.0));
    start += len;
  }
  return NetworkTrace(std::move(segments), duration_ms);
}

}  // namespace rtclab
