#include "rtclab/netsim/simulator.h"

#include <cmath>

#include "rtclab/common/errors.h"

namespace rtclab {
namespace {

constexpr uint64_t kReverseSeedSalt = 0x9e3779b97f4a7c15ULL;

}  // namespace

Simulator::Simulator(std::shared_ptr<const NetworkTrace> trace, SimConfig cfg)
    : trace_(std::move(trace)),
      cfg_(cfg),
      forward_(trace_, LinkConfig{cfg.queue_limit_ms, true, cfg.seed}),
      reverse_(trace_, LinkConfig{cfg.queue_limit_ms, false,
                                  cfg.seed ^ kReverseSeedSalt}) {
  if (cfg_.cross_packet_bytes == 0)
    throw ValidationError("cross traffic packet size must be > 0");
  if (trace_->segments().size() > 1)
    events_.Push(MsToUs(static_cast<double>(trace_->segments()[1].start_ms)),
                 EventKind::kSegmentBoundary, 1);
}

void Simulator::set_event_log(std::ostream* log) { event_log_ = log; }

void Simulator::Log(SimTime t, const char* event, const SimPacket& pkt,
                    const char* detail) {
  if (!event_log_)
    return;
  *event_log_ << t << ',' << event << ',' << FlowName(pkt.flow) << ','
              << pkt.id << ',' << pkt.size_bytes << ',' << detail << '\n';
}

uint64_t Simulator::Store(const SimPacket& pkt) {
  if (!free_slots_.empty()) {
    const uint64_t slot = free_slots_.back();
    free_slots_.pop_back();
    slots_[slot] = pkt;
    return slot;
  }
  slots_.push_back(pkt);
  return slots_.size() - 1;
}

EnqueueResult Simulator::Send(Direction dir, SimPacket pkt) {
  pkt.send_time = now();
  pkt.arrival_time.reset();
  auto& stats = stats_[static_cast<int>(pkt.flow)];
  ++stats.sent;
  Log(now(), "send", pkt, "");

  BottleneckLink& link = dir == Direction::kForward ? forward_ : reverse_;
  const EnqueueResult result = link.Enqueue(pkt, now());
  switch (result.outcome) {
    case EnqueueOutcome::kScheduled:
      events_.Push(result.arrival, EventKind::kArrival, Store(pkt));
      break;
    case EnqueueOutcome::kDroppedLoss:
      ++stats.dropped_loss;
      pending_drops_.push_back({pkt, DropReason::kLoss, now()});
      Log(now(), "drop", pkt, "loss");
      break;
    case EnqueueOutcome::kDroppedQueueFull:
      ++stats.dropped_queue;
      pending_drops_.push_back({pkt, DropReason::kQueueFull, now()});
      Log(now(), "drop", pkt, "queue");
      break;
  }
  if (pkt.flow == Flow::kCross && result.outcome != EnqueueOutcome::kScheduled)
    ++cross_feedback_.lost;
  return result;
}

void Simulator::EmitCrossPacket() {
  SimPacket pkt;
  pkt.id = next_cross_id_++;
  pkt.flow = Flow::kCross;
  pkt.size_bytes = cfg_.cross_packet_bytes;
  Send(Direction::kForward, pkt);
}

void Simulator::ScheduleCrossTraffic(SimTime interval) {
  if (interval <= 0)
    throw ValidationError("cross traffic interval must be > 0");
  if (cfg_.cross.mode == CrossTrafficMode::kOff)
    return;
  cross_credit_bytes_ +=
      CrossOfferedLoad(cfg_.cross, UsToMs(interval), cross_feedback_);
  cross_feedback_ = {};
  const auto packets = static_cast<int64_t>(
      std::floor(cross_credit_bytes_ / cfg_.cross_packet_bytes));
  if (packets <= 0)
    return;
  cross_credit_bytes_ -= static_cast<double>(packets) * cfg_.cross_packet_bytes;
  for (int64_t k = 0; k < packets; ++k)
    events_.Push(now() + interval * k / packets, EventKind::kCrossSend, 0);
}

RunResult Simulator::RunUntil(SimTime t) {
  if (t < now())
    throw StateError("RunUntil target precedes current time");
  RunResult out;
  while (!events_.Empty() && events_.Top().time <= t) {
    const Event e = events_.Pop();
    switch (e.kind) {
      case EventKind::kArrival: {
        SimPacket pkt = slots_[e.payload];
        free_slots_.push_back(e.payload);
        auto& stats = stats_[static_cast<int>(pkt.flow)];
        ++stats.delivered;
        stats.delivered_bytes += pkt.size_bytes;
        if (pkt.flow == Flow::kCross)
          ++cross_feedback_.delivered;
        Log(e.time, "deliver", pkt, "");
        out.delivered.push_back(pkt);
        break;
      }
      case EventKind::kCrossSend:
        EmitCrossPacket();
        break;
      case EventKind::kSegmentBoundary: {
        forward_.RefreshParams(e.time);
        reverse_.RefreshParams(e.time);
        const auto next = e.payload + 1;
        if (next < trace_->segments().size())
          events_.Push(
              MsToUs(static_cast<double>(trace_->segments()[next].start_ms)),
              EventKind::kSegmentBoundary, next);
        break;
      }
    }
  }
  events_.AdvanceTo(t);
  out.dropped = std::move(pending_drops_);
  pending_drops_.clear();
  return out;
}

}  // namespace rtclab
