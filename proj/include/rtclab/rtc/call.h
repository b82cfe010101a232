#ifndef RTCLAB_RTC_CALL_H_
#define RTCLAB_RTC_CALL_H_

#include <cstdint>
#include <memory>
#include <vector>

#include "rtclab/netsim/simulator.h"
#include "rtclab/rtc/receiver.h"
#include "rtclab/rtc/sender.h"

namespace rtclab {

// RTT from an echoed timestamp: time since the echoed media packet was sent,
// minus the time the receiver held it. Equals the media packet's forward
// delay plus the feedback's reverse delay.
double RttFromEcho(const FeedbackMessage& fb, SimTime feedback_arrival);

struct CallConfig {
  SenderConfig sender;
  SimConfig sim;
  uint32_t feedback_packet_bytes = 80;
};

struct CallTotals {
  uint64_t media_sent = 0;
  uint64_t media_delivered = 0;
  uint64_t media_dropped = 0;
  uint64_t media_delivered_bytes = 0;
};

// Caller and callee connected by the simulated path. Each Step() sends one
// feedback message carrying the receiver's estimate, runs the media source
// for one window, and returns the receiver's statistics for that window.
class Call {
 public:
  Call(std::shared_ptr<const NetworkTrace> trace, CallConfig cfg);

  ObservationWindow Step(double estimate_kbps, double window_len_ms);

  SimTime now() const { return sim_.now(); }
  const Sender& sender() const { return sender_; }
  const Receiver& receiver() const { return receiver_; }
  const Simulator& sim() const { return sim_; }
  Simulator& mutable_sim() { return sim_; }
  CallTotals totals() const;

  // Times at which feedback reached the sender and the target it applied.
  struct AppliedFeedback {
    SimTime arrival;
    double target_kbps;
  };
  const std::vector<AppliedFeedback>& applied_feedback() const {
    return applied_;
  }
  void set_record_feedback(bool on) { record_feedback_ = on; }

 private:
  void Process(const RunResult& result);

  CallConfig cfg_;
  Simulator sim_;
  Sender sender_;
  Receiver receiver_;
  std::vector<FeedbackMessage> in_flight_feedback_;
  std::vector<uint64_t> free_feedback_slots_;
  uint64_t next_feedback_id_ = 1;
  bool record_feedback_ = false;
  std::vector<AppliedFeedback> applied_;
};

}  // namespace rtclab

#endif  // RTCLAB_RTC_CALL_H_
