#ifndef RTCLAB_NETSIM_BOTTLENECK_LINK_H_
#define RTCLAB_NETSIM_BOTTLENECK_LINK_H_

#include <cstdint>
#include <deque>
#include <memory>
#include <random>

#include "rtclab/netsim/sim_types.h"
#include "rtclab/trace/trace.h"

namespace rtclab {

// Serialization time of `size_bytes` at `capacity_kbps`, in ms.
// Throws ValidationError for capacity <= 0.
double SerializationDelayMs(double size_bytes, double capacity_kbps);

struct LinkConfig {
  // Drop-tail limit on queuing delay.
  double queue_limit_ms = 500.0;
  // Reverse (feedback) paths mirror the trace but never drop at random.
  bool random_loss = true;
  uint64_t seed = 1;
};

enum class EnqueueOutcome : uint8_t { kScheduled, kDroppedLoss, kDroppedQueueFull };

struct EnqueueResult {
  EnqueueOutcome outcome = EnqueueOutcome::kScheduled;
  SimTime departure = 0;  // end of serialization
  SimTime arrival = 0;    // departure + one-way delay (FIFO-adjusted)
};

// Single FIFO bottleneck driven by a trace. Departure and arrival times are
// fixed when a packet is admitted; a packet uses the capacity and delay in
// force when its serialization starts.
class BottleneckLink {
 public:
  BottleneckLink(std::shared_ptr<const NetworkTrace> trace, LinkConfig cfg);

  // Pre: pkt.send_time <= now. On success sets pkt.arrival_time.
  EnqueueResult Enqueue(SimPacket& pkt, SimTime now);

  // Parameters in force at `t` (the last segment persists past the end).
  const LinkParams& ParamsAt(SimTime t) const;

  // Reloads current params; called at segment boundaries.
  void RefreshParams(SimTime now);
  const LinkParams& params() const { return *current_; }

  SimTime busy_until() const { return busy_until_; }
  // Waiting time a packet admitted at `now` would see before serialization.
  double QueuingDelayMs(SimTime now) const;
  // Bytes admitted but not yet fully serialized at `now`.
  uint64_t QueuedBytes(SimTime now);

  const LinkConfig& config() const { return cfg_; }

 private:
  struct Queued {
    SimTime departure;
    uint32_t size_bytes;
  };

  void Drain(SimTime now);
  double NextUniform();

  std::shared_ptr<const NetworkTrace> trace_;
  LinkConfig cfg_;
  const LinkParams* current_;
  std::mt19937_64 rng_;
  std::deque<Queued> queue_;
  uint64_t queued_bytes_ = 0;
  SimTime busy_until_ = 0;
  SimTime last_arrival_ = 0;
};

}  // namespace rtclab

#endif  // RTCLAB_NETSIM_BOTTLENECK_LINK_H_
