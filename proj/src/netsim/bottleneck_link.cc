#include "rtclab/netsim/bottleneck_link.h"

#include <algorithm>
#include <cmath>

#include "rtclab/common/errors.h"
#include "rtclab/common/random.h"

namespace rtclab {

double SerializationDelayMs(double size_bytes, double capacity_kbps) {
  if (!(capacity_kbps > 0.0))
    throw ValidationError("serialization delay: capacity must be > 0");
  // bits / (kbit/s) = ms
  return size_bytes * 8.0 / capacity_kbps;
}

BottleneckLink::BottleneckLink(std::shared_ptr<const NetworkTrace> trace,
                               LinkConfig cfg)
    : trace_(std::move(trace)), cfg_(cfg), rng_(cfg.seed) {
  if (!trace_)
    throw ValidationError("bottleneck link requires a trace");
  if (!(cfg_.queue_limit_ms > 0.0))
    throw ValidationError("queue limit must be > 0 ms");
  current_ = &trace_->segments().front().params;
}

const LinkParams& BottleneckLink::ParamsAt(SimTime t) const {
  const double ms = UsToMs(t);
  if (ms >= static_cast<double>(trace_->duration_ms()))
    return trace_->segments().back().params;
  return trace_->At(std::max(0.0, ms));
}

void BottleneckLink::RefreshParams(SimTime now) { current_ = &ParamsAt(now); }

double BottleneckLink::NextUniform() {
  return UnitUniform(rng_);
}

void BottleneckLink::Drain(SimTime now) {
  while (!queue_.empty() && queue_.front().departure <= now) {
    queued_bytes_ -= queue_.front().size_bytes;
    queue_.pop_front();
  }
}

double BottleneckLink::QueuingDelayMs(SimTime now) const {
  return UsToMs(std::max<SimTime>(0, busy_until_ - now));
}

uint64_t BottleneckLink::QueuedBytes(SimTime now) {
  Drain(now);
  return queued_bytes_;
}

EnqueueResult BottleneckLink::Enqueue(SimPacket& pkt, SimTime now) {
  if (pkt.send_time > now)
    throw StateError("packet enqueued before its send time");
  if (pkt.size_bytes == 0)
    throw ValidationError("packet size must be > 0");
  Drain(now);

  EnqueueResult result;
  const LinkParams& at_admission = ParamsAt(now);
  if (cfg_.random_loss && at_admission.loss_rate > 0.0 &&
      NextUniform() < at_admission.loss_rate) {
    result.outcome = EnqueueOutcome::kDroppedLoss;
    return result;
  }

  const SimTime start = std::max(now, busy_until_);
  const LinkParams& at_start = ParamsAt(start);
  const SimTime serialization =
      MsToUsCeil(SerializationDelayMs(pkt.size_bytes, at_start.capacity_kbps));
  const SimTime backlog = (start - now) + serialization;
  if (UsToMs(backlog) > cfg_.queue_limit_ms) {
    result.outcome = EnqueueOutcome::kDroppedQueueFull;
    return result;
  }

  result.departure = start + serialization;
  // A delay decrease at a segment boundary must not let a later packet
  // overtake an earlier one.
  result.arrival = std::max(
      result.departure + MsToUsCeil(at_start.one_way_delay_ms), last_arrival_);
  busy_until_ = result.departure;
  last_arrival_ = result.arrival;
  queue_.push_back({result.departure, pkt.size_bytes});
  queued_bytes_ += pkt.size_bytes;
  pkt.arrival_time = result.arrival;
  return result;
}

}  // namespace rtclab
