#ifndef RTCLAB_EVAL_METRICS_H_
#define RTCLAB_EVAL_METRICS_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rtclab/rtc/call.h"

namespace rtclab {

struct StepRecord {
  double time_ms = 0.0;
  double capacity_kbps = 0.0;
  double estimate_kbps = 0.0;
  double receive_rate_kbps = 0.0;
  double rtt_ms = 0.0;
  bool rtt_known = false;
  double loss_rate = 0.0;
  uint64_t packets_received = 0;
  uint64_t packets_lost = 0;
  double reward = 0.0;
};

struct EpisodeRecord {
  std::string trace_id;
  std::vector<StepRecord> steps;
  CallTotals totals;
};

// Columns of the comparison table. Aggregation pools every step of every
// episode: utilization = sum R / sum capacity, loss = sum lost / sum
// (lost + received), RTT statistics over per-step average RTTs (steps
// before the first RTT sample excluded), reward mean over steps.
struct MetricsSummary {
  std::string estimator;
  double utilization_pct = 0.0;
  double rtt_avg_ms = 0.0;
  double rtt_p50_ms = 0.0;
  double rtt_p95_ms = 0.0;
  double loss_pct = 0.0;
  double reward_mean = 0.0;
  uint64_t steps = 0;
};

// 100 * sum(R_t) / sum(capacity_t). Throws ValidationError for an empty
// episode or zero total capacity.
double Utilization(const EpisodeRecord& ep);
double Utilization(std::span<const EpisodeRecord> eps);

// Nearest rank: sorted[ceil(p/100 * n) - 1], p = 0 gives the minimum.
// Throws ValidationError for no samples or p outside [0, 100].
double Percentile(std::vector<double> samples, double p);

MetricsSummary Summarize(const std::string& estimator,
                         std::span<const EpisodeRecord> eps);

}  // namespace rtclab

#endif  // RTCLAB_EVAL_METRICS_H_
