#include "rtclab/rtc/call.h"

#include <algorithm>

#include "rtclab/common/errors.h"

namespace rtclab {

double RttFromEcho(const FeedbackMessage& fb, SimTime feedback_arrival) {
  if (!fb.has_echo)
    throw StateError("feedback carries no echoed timestamp");
  return UsToMs(feedback_arrival - fb.echoed_send_time - fb.receiver_hold);
}

Call::Call(std::shared_ptr<const NetworkTrace> trace, CallConfig cfg)
    : cfg_(cfg), sim_(std::move(trace), cfg.sim), sender_(cfg.sender) {}

CallTotals Call::totals() const {
  const FlowStats& s = sim_.stats(Flow::kMedia);
  return {s.sent, s.delivered, s.dropped_loss + s.dropped_queue,
          s.delivered_bytes};
}

void Call::Process(const RunResult& result) {
  for (const SimPacket& pkt : result.delivered) {
    switch (pkt.flow) {
      case Flow::kMedia:
        receiver_.OnPacket(pkt);
        break;
      case Flow::kFeedback: {
        const FeedbackMessage fb = in_flight_feedback_[pkt.payload_tag];
        free_feedback_slots_.push_back(pkt.payload_tag);
        const double target = sender_.OnFeedback(fb);
        if (record_feedback_)
          applied_.push_back({*pkt.arrival_time, target});
        if (fb.has_echo)
          receiver_.OnRttSample(RttFromEcho(fb, *pkt.arrival_time));
        break;
      }
      case Flow::kCross:
        break;
    }
  }
}

ObservationWindow Call::Step(double estimate_kbps, double window_len_ms) {
  if (!(window_len_ms > 0.0))
    throw ValidationError("window length must be > 0");
  const SimTime start = sim_.now();
  const SimTime end = start + MsToUs(window_len_ms);

  FeedbackMessage fb;
  fb.bandwidth_estimate_kbps =
      std::clamp(estimate_kbps, kMinBitrateKbps, kMaxBitrateKbps);
  fb.receiver_timestamp = start;
  if (const auto echo = receiver_.TakeEcho(start)) {
    fb.has_echo = true;
    fb.echoed_send_time = echo->send_time;
    fb.receiver_hold = echo->hold;
  }
  uint64_t slot;
  if (!free_feedback_slots_.empty()) {
    slot = free_feedback_slots_.back();
    free_feedback_slots_.pop_back();
    in_flight_feedback_[slot] = fb;
  } else {
    slot = in_flight_feedback_.size();
    in_flight_feedback_.push_back(fb);
  }
  SimPacket fb_pkt;
  fb_pkt.id = next_feedback_id_++;
  fb_pkt.flow = Flow::kFeedback;
  fb_pkt.size_bytes = cfg_.feedback_packet_bytes;
  fb_pkt.payload_tag = slot;
  // The reverse path never drops (no random loss, a feedback message per
  // window cannot fill a 500 ms queue), so the slot is always reclaimed.
  sim_.Send(Direction::kReverse, fb_pkt);

  sim_.ScheduleCrossTraffic(end - start);

  while (sender_.NextEmissionTime() < end) {
    const SimTime at = std::max(sender_.NextEmissionTime(), sim_.now());
    Process(sim_.RunUntil(at));
    for (const SimPacket& pkt : sender_.EmitDue(at))
      sim_.Send(Direction::kForward, pkt);
  }
  Process(sim_.RunUntil(end));
  return receiver_.CloseWindow(start, window_len_ms);
}

}  // namespace rtclab
