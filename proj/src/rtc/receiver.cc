#include "rtclab/rtc/receiver.h"

#include "rtclab/common/errors.h"

namespace rtclab {

void Receiver::OnPacket(const SimPacket& pkt) {
  if (!pkt.arrival_time)
    throw StateError("receiver got a packet that never arrived");
  if (pkt.id <= highest_seq_) {
    ++diag_.duplicates;
    return;
  }
  const uint64_t gap = pkt.id - highest_seq_ - 1;
  losses_ += gap;
  diag_.losses += gap;
  highest_seq_ = pkt.id;

  const SimTime arrival = *pkt.arrival_time;
  if (previous_arrival_) {
    interval_sum_ms_ += UsToMs(arrival - *previous_arrival_);
    ++interval_count_;
  }
  previous_arrival_ = arrival;
  last_media_ = LastMedia{pkt.send_time, arrival};
  echo_send_sum_ += pkt.send_time;
  echo_arrival_sum_ += arrival;
  ++echo_count_;

  bytes_ += pkt.size_bytes;
  ++packets_;
  ++diag_.received;
  diag_.received_bytes += pkt.size_bytes;
}

void Receiver::OnRttSample(double rtt_ms) {
  if (!(rtt_ms >= 0.0))
    throw ValidationError("RTT sample must be >= 0");
  rtt_sum_ms_ += rtt_ms;
  ++rtt_count_;
}

std::optional<Receiver::Echo> Receiver::TakeEcho(SimTime now) {
  if (!last_media_)
    return std::nullopt;
  Echo echo;
  if (echo_count_ == 0) {
    echo = {last_media_->send_time, now - last_media_->arrival_time};
  } else {
    echo = {echo_send_sum_ / echo_count_,
            now - echo_arrival_sum_ / echo_count_};
  }
  echo_send_sum_ = echo_arrival_sum_ = 0;
  echo_count_ = 0;
  return echo;
}

ObservationWindow Receiver::CloseWindow(SimTime /*window_start*/,
                                        double window_len_ms) {
  if (!(window_len_ms > 0.0))
    throw ValidationError("window length must be > 0");
  if (rtt_count_ > 0) {
    carried_rtt_ms_ = rtt_sum_ms_ / static_cast<double>(rtt_count_);
    rtt_known_ = true;
  }

  ObservationWindow w;
  w.avg_rtt_ms = carried_rtt_ms_;
  w.rtt_known = rtt_known_;
  w.packets_received = packets_;
  w.packets_lost = losses_;
  if (packets_ == 0) {
    w.receive_rate_kbps = 0.0;
    w.avg_packet_interval_ms = window_len_ms;
    w.loss_rate = 0.0;
    w.valid = false;
  } else {
    w.receive_rate_kbps = static_cast<double>(bytes_) * 8.0 / window_len_ms;
    w.avg_packet_interval_ms =
        interval_count_ > 0
            ? interval_sum_ms_ / static_cast<double>(interval_count_)
            : window_len_ms;
    w.loss_rate = static_cast<double>(losses_) /
                  static_cast<double>(losses_ + packets_);
    w.valid = true;
  }

  bytes_ = packets_ = losses_ = 0;
  interval_sum_ms_ = 0.0;
  interval_count_ = 0;
  rtt_sum_ms_ = 0.0;
  rtt_count_ = 0;
  return w;
}

}  // namespace rtclab
