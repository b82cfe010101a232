#include "rtclab/eval/metrics.h"

#include <algorithm>
#include <cmath>

#include "rtclab/common/errors.h"

namespace rtclab {

double Utilization(std::span<const EpisodeRecord> eps) {
  double rate = 0.0;
  double capacity = 0.0;
  std::size_t steps = 0;
  for (const EpisodeRecord& ep : eps) {
    for (const StepRecord& s : ep.steps) {
      rate += s.receive_rate_kbps;
      capacity += s.capacity_kbps;
    }
    steps += ep.steps.size();
  }
  if (steps == 0)
    throw ValidationError("utilization of an empty episode");
  if (!(capacity > 0.0))
    throw ValidationError("utilization with zero total capacity");
  return 100.0 * rate / capacity;
}

double Utilization(const EpisodeRecord& ep) {
  return Utilization(std::span<const EpisodeRecord>(&ep, 1));
}

double Percentile(std::vector<double> samples, double p) {
  if (samples.empty())
    throw ValidationError("percentile of no samples");
  if (!(p >= 0.0 && p <= 100.0))
    throw ValidationError("percentile must be within [0, 100]");
  std::sort(samples.begin(), samples.end());
  const auto n = static_cast<double>(samples.size());
  // Rounding guards against p/100*n landing a hair above an integer.
  const double rank = std::ceil(p / 100.0 * n - 1e-9);
  const auto idx = static_cast<std::size_t>(std::max(1.0, rank)) - 1;
  return samples[std::min(idx, samples.size() - 1)];
}

MetricsSummary Summarize(const std::string& estimator,
                         std::span<const EpisodeRecord> eps) {
  MetricsSummary m;
  m.estimator = estimator;
  m.utilization_pct = Utilization(eps);

  std::vector<double> rtts;
  double rtt_sum = 0.0;
  double reward_sum = 0.0;
  uint64_t lost = 0;
  uint64_t received = 0;
  for (const EpisodeRecord& ep : eps) {
    for (const StepRecord& s : ep.steps) {
      if (s.rtt_known) {
        rtts.push_back(s.rtt_ms);
        rtt_sum += s.rtt_ms;
      }
      reward_sum += s.reward;
      lost += s.packets_lost;
      received += s.packets_received;
      ++m.steps;
    }
  }
  if (!rtts.empty()) {
    m.rtt_avg_ms = rtt_sum / static_cast<double>(rtts.size());
    m.rtt_p50_ms = Percentile(rtts, 50.0);
    m.rtt_p95_ms = Percentile(std::move(rtts), 95.0);
  }
  if (lost + received > 0)
    m.loss_pct =
        100.0 * static_cast<double>(lost) / static_cast<double>(lost + received);
  m.reward_mean = reward_sum / static_cast<double>(m.steps);
  return m;
}

}  // namespace rtclab
