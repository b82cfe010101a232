#ifndef RTCLAB_NETSIM_SIMULATOR_H_
#define RTCLAB_NETSIM_SIMULATOR_H_

#include <array>
#include <cstdint>
#include <memory>
#include <ostream>
#include <vector>

#include "rtclab/netsim/bottleneck_link.h"
#include "rtclab/netsim/cross_traffic.h"
#include "rtclab/netsim/event_queue.h"
#include "rtclab/netsim/sim_types.h"
#include "rtclab/trace/trace.h"

namespace rtclab {

struct SimConfig {
  double queue_limit_ms = 500.0;
  uint64_t seed = 1;
  CrossTrafficModel cross;
  uint32_t cross_packet_bytes = 1500;
};

struct FlowStats {
  uint64_t sent = 0;
  uint64_t delivered = 0;
  uint64_t dropped_loss = 0;
  uint64_t dropped_queue = 0;
  uint64_t delivered_bytes = 0;

  uint64_t in_flight() const {
    return sent - delivered - dropped_loss - dropped_queue;
  }
};

struct DropNotice {
  SimPacket packet;
  DropReason reason = DropReason::kLoss;
  SimTime time = 0;
};

struct RunResult {
  std::vector<SimPacket> delivered;
  std::vector<DropNotice> dropped;
};

enum class Direction : uint8_t { kForward, kReverse };

// Two-endpoint path: a forward bottleneck carrying media and cross traffic,
// and a reverse path for feedback with the same trace parameters, no cross
// traffic and no random loss. Single-threaded; movable as a whole.
class Simulator {
 public:
  Simulator(std::shared_ptr<const NetworkTrace> trace, SimConfig cfg);

  Simulator(Simulator&&) = default;
  Simulator& operator=(Simulator&&) = default;

  SimTime now() const { return events_.current_time(); }

  // Sends at the current time; send_time is overwritten with now(). Drops
  // are reported both in the result and in the next RunUntil().
  EnqueueResult Send(Direction dir, SimPacket pkt);

  // Dispatches every event with time <= t in order, then sets now() = t.
  // Returns packets delivered (arrival_time set) and drops since the last
  // call, cross traffic included.
  RunResult RunUntil(SimTime t);

  // Computes cross traffic for [now, now + interval) and schedules the
  // packet emissions evenly across it.
  void ScheduleCrossTraffic(SimTime interval);

  const FlowStats& stats(Flow flow) const {
    return stats_[static_cast<int>(flow)];
  }
  const BottleneckLink& forward_link() const { return forward_; }
  const BottleneckLink& reverse_link() const { return reverse_; }
  const NetworkTrace& trace() const { return *trace_; }

  // CSV lines `time_us,event,flow,id,size,detail`; pass nullptr to disable.
  void set_event_log(std::ostream* log);

 private:
  uint64_t Store(const SimPacket& pkt);
  void Log(SimTime t, const char* event, const SimPacket& pkt,
           const char* detail);
  void EmitCrossPacket();

  std::shared_ptr<const NetworkTrace> trace_;
  SimConfig cfg_;
  BottleneckLink forward_;
  BottleneckLink reverse_;
  EventQueue events_;

  // In-flight packets, indexed by event payload; freed slots are reused.
  std::vector<SimPacket> slots_;
  std::vector<uint64_t> free_slots_;

  std::array<FlowStats, kNumFlows> stats_{};
  std::vector<DropNotice> pending_drops_;

  CrossFeedback cross_feedback_;
  double cross_credit_bytes_ = 0.0;
  uint64_t next_cross_id_ = 1;

  std::ostream* event_log_ = nullptr;
};

}  // namespace rtclab

#endif  // RTCLAB_NETSIM_SIMULATOR_H_
