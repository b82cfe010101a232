#ifndef RTCLAB_RTC_RECEIVER_H_
#define RTCLAB_RTC_RECEIVER_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "rtclab/netsim/sim_types.h"

namespace rtclab {

// Receiver statistics over one fixed window. Units: kb/s, ms, fraction, ms.
struct ObservationWindow {
  double receive_rate_kbps = 0.0;
  double avg_packet_interval_ms = 0.0;
  double loss_rate = 0.0;
  double avg_rtt_ms = 0.0;
  bool valid = false;

  // Diagnostics for pooled metrics; not part of the policy state.
  uint64_t packets_received = 0;
  uint64_t packets_lost = 0;
  bool rtt_known = false;  // false until the first RTT sample ever
};

struct ReceiverDiagnostics {
  uint64_t received = 0;
  uint64_t losses = 0;
  uint64_t duplicates = 0;
  uint64_t received_bytes = 0;
};

// Per-window accumulation of media arrivals and RTT samples. Sequence
// numbers start at 1; since the path never reorders, a gap is a loss.
class Receiver {
 public:
  // Pre: pkt.arrival_time is set.
  void OnPacket(const SimPacket& pkt);
  void OnRttSample(double rtt_ms);

  // Closes the window [window_start, window_start + window_len) and resets
  // the accumulators. An empty window reports R = 0, interval = window_len,
  // L = 0, carries the previous D, and is flagged invalid.
  ObservationWindow CloseWindow(SimTime window_start,
                                double window_len_ms = 50.0);

  const ReceiverDiagnostics& diagnostics() const { return diag_; }
  uint64_t highest_sequence() const { return highest_seq_; }

  // Latest media packet received, for echoing in feedback.
  struct LastMedia {
    SimTime send_time;
    SimTime arrival_time;
  };
  const std::optional<LastMedia>& last_media() const { return last_media_; }

  // Echo for the next feedback message: mean send time of the media packets
  // received since the previous call and their mean hold time at `now`.
  // Falls back to the latest packet when nothing arrived in between; empty
  // before the first media packet.
  struct Echo {
    SimTime send_time;
    SimTime hold;
  };
  std::optional<Echo> TakeEcho(SimTime now);

 private:
  // Window accumulators.
  uint64_t bytes_ = 0;
  uint64_t packets_ = 0;
  uint64_t losses_ = 0;
  double interval_sum_ms_ = 0.0;
  uint64_t interval_count_ = 0;
  double rtt_sum_ms_ = 0.0;
  uint64_t rtt_count_ = 0;

  uint64_t highest_seq_ = 0;
  std::optional<SimTime> previous_arrival_;
  std::optional<LastMedia> last_media_;
  SimTime echo_send_sum_ = 0;
  SimTime echo_arrival_sum_ = 0;
  int64_t echo_count_ = 0;
  double carried_rtt_ms_ = 0.0;
  bool rtt_known_ = false;
  ReceiverDiagnostics diag_;
};

}  // namespace rtclab

#endif  // RTCLAB_RTC_RECEIVER_H_
