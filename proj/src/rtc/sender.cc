#include "rtclab/rtc/sender.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "rtclab/common/errors.h"

namespace rtclab {

void ValidateFeedback(const FeedbackMessage& fb) {
  if (!(fb.bandwidth_estimate_kbps > 0.0) ||
      !std::isfinite(fb.bandwidth_estimate_kbps))
    throw ValidationError("feedback estimate " +
                          std::to_string(fb.bandwidth_estimate_kbps) +
                          " kb/s must be finite and > 0");
}

Sender::Sender(SenderConfig cfg)
    : cfg_(cfg),
      target_kbps_(std::clamp(cfg.initial_bitrate_kbps, kMinBitrateKbps,
                              kMaxBitrateKbps)) {
  if (!(cfg_.frame_interval_ms > 0.0) || cfg_.max_packet_bytes == 0 ||
      cfg_.audio_packets_per_s < 0.0)
    throw ValidationError("invalid sender configuration");
}

double Sender::AudioBitrateKbps() const {
  return cfg_.audio_packets_per_s * cfg_.audio_packet_bytes * 8.0 / 1000.0;
}

SimTime Sender::FrameTime(uint64_t k) const {
  return MsToUs(static_cast<double>(k) * cfg_.frame_interval_ms);
}

SimTime Sender::AudioTime(uint64_t k) const {
  if (cfg_.audio_packets_per_s <= 0.0)
    return INT64_MAX;
  return MsToUs(static_cast<double>(k) * 1000.0 / cfg_.audio_packets_per_s);
}

SimTime Sender::NextEmissionTime() const {
  return std::min(FrameTime(frame_index_), AudioTime(audio_index_));
}

double Sender::OnFeedback(const FeedbackMessage& fb) {
  ValidateFeedback(fb);
  target_kbps_ =
      std::clamp(fb.bandwidth_estimate_kbps, kMinBitrateKbps, kMaxBitrateKbps);
  return target_kbps_;
}

void Sender::EmitAudio(SimTime at, std::vector<SimPacket>& out) {
  SimPacket pkt;
  pkt.id = next_seq_++;
  pkt.flow = Flow::kMedia;
  pkt.size_bytes = cfg_.audio_packet_bytes;
  pkt.send_time = at;
  out.push_back(pkt);
}

void Sender::EmitFrame(SimTime at, std::vector<SimPacket>& out) {
  const double video_kbps = std::max(0.0, target_kbps_ - AudioBitrateKbps());
  const double exact =
      video_kbps * cfg_.frame_interval_ms / 8.0 + pacing_debt_bytes_;
  auto frame_bytes = static_cast<uint64_t>(std::floor(exact));
  if (frame_bytes < cfg_.min_frame_bytes) {
    frame_bytes = cfg_.min_frame_bytes;
    pacing_debt_bytes_ = 0.0;
  } else {
    pacing_debt_bytes_ = exact - static_cast<double>(frame_bytes);
  }
  // Balanced split into the fewest packets that respect the size cap.
  const uint64_t packets =
      (frame_bytes + cfg_.max_packet_bytes - 1) / cfg_.max_packet_bytes;
  const uint64_t base = frame_bytes / packets;
  const uint64_t extra = frame_bytes % packets;
  for (uint64_t i = 0; i < packets; ++i) {
    SimPacket pkt;
    pkt.id = next_seq_++;
    pkt.flow = Flow::kMedia;
    pkt.size_bytes = static_cast<uint32_t>(base + (i < extra ? 1 : 0));
    pkt.send_time = at;
    out.push_back(pkt);
  }
}

std::vector<SimPacket> Sender::EmitDue(SimTime now) {
  std::vector<SimPacket> out;
  while (true) {
    const SimTime audio_at = AudioTime(audio_index_);
    const SimTime frame_at = FrameTime(frame_index_);
    if (audio_at <= now && audio_at <= frame_at) {
      EmitAudio(audio_at, out);
      ++audio_index_;
    } else if (frame_at <= now) {
      EmitFrame(frame_at, out);
      ++frame_index_;
    } else {
      break;
    }
  }
  return out;
}

std::vector<SimPacket> Sender::Packetize(double interval_ms, SimTime now) {
  if (!(interval_ms > 0.0))
    throw ValidationError("packetize interval must be > 0");
  const SimTime end = now + MsToUs(interval_ms);
  std::vector<SimPacket> out;
  while (NextEmissionTime() < end) {
    auto due = EmitDue(NextEmissionTime());
    out.insert(out.end(), due.begin(), due.end());
  }
  return out;
}

}  // namespace rtclab
