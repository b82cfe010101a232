#ifndef RTCLAB_RTC_SENDER_H_
#define RTCLAB_RTC_SENDER_H_

#include <cstdint>
#include <vector>

#include "rtclab/netsim/sim_types.h"

namespace rtclab {

inline constexpr double kMinBitrateKbps = 10.0;
inline constexpr double kMaxBitrateKbps = 8000.0;

struct FeedbackMessage {
  double bandwidth_estimate_kbps = 0.0;
  SimTime receiver_timestamp = 0;
  // Send time of the latest media packet seen by the receiver, and how long
  // the receiver held it before sending this message. Absent before the
  // first media arrival.
  bool has_echo = false;
  SimTime echoed_send_time = 0;
  SimTime receiver_hold = 0;
};

// Throws ValidationError unless the estimate is finite and > 0. Values
// above the ceiling are legal and clamped by the sender.
void ValidateFeedback(const FeedbackMessage& fb);

struct SenderConfig {
  double frame_interval_ms = 1000.0 / 30.0;
  uint32_t max_packet_bytes = 1200;
  double audio_packets_per_s = 50.0;
  uint32_t audio_packet_bytes = 100;
  // Smallest video frame emitted when the audio stream eats the whole
  // target.
  uint32_t min_frame_bytes = 50;
  double initial_bitrate_kbps = 300.0;
};

// Synthetic media source. The target covers audio plus video; video frames
// get what remains after the audio stream. Packets of one frame leave
// back-to-back.
class Sender {
 public:
  explicit Sender(SenderConfig cfg = {});

  // Emits every audio packet and video frame scheduled in
  // [now, now + interval). Each packet's send_time is its scheduled time.
  std::vector<SimPacket> Packetize(double interval_ms, SimTime now);

  // Earliest scheduled emission (audio or video), in us.
  SimTime NextEmissionTime() const;
  // Emits everything scheduled at or before `now`.
  std::vector<SimPacket> EmitDue(SimTime now);

  // target = clamp(estimate, 10, 8000); takes effect at the next emission.
  double OnFeedback(const FeedbackMessage& fb);

  double target_bitrate_kbps() const { return target_kbps_; }
  uint64_t next_sequence() const { return next_seq_; }
  const SenderConfig& config() const { return cfg_; }

  // Audio share of the target, kb/s.
  double AudioBitrateKbps() const;

 private:
  void EmitFrame(SimTime at, std::vector<SimPacket>& out);
  void EmitAudio(SimTime at, std::vector<SimPacket>& out);
  SimTime FrameTime(uint64_t k) const;
  SimTime AudioTime(uint64_t k) const;

  SenderConfig cfg_;
  double target_kbps_;
  uint64_t next_seq_ = 1;
  uint64_t frame_index_ = 0;
  uint64_t audio_index_ = 0;
  double pacing_debt_bytes_ = 0.0;
};

}  // namespace rtclab

#endif  // RTCLAB_RTC_SENDER_H_
