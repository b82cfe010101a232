#ifndef RTCLAB_EVAL_EVALUATE_H_
#define RTCLAB_EVAL_EVALUATE_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "rtclab/env/estimator.h"
#include "rtclab/env/rtc_env.h"
#include "rtclab/eval/metrics.h"
#include "rtclab/trace/trace.h"

namespace rtclab {

struct TraceEntry {
  std::string id;
  std::shared_ptr<const NetworkTrace> trace;
};

// Builds one estimator per episode. The trace is passed so that test
// harnesses can construct ground-truth estimators; learned and filter
// estimators ignore it.
using EstimatorFactory = std::function<std::unique_ptr<BandwidthEstimator>(
    const TraceEntry& entry)>;

struct EvalConfig {
  // Template for every episode; trace and seed are filled per trace.
  EnvConfig env;
  uint64_t seed = 1;
  int workers = 1;
};

// Per-trace environment seed: identical across estimators (paired design).
uint64_t EpisodeSeed(uint64_t seed, std::size_t trace_index);

// Warm-up window first, then one step per remaining window. The estimate
// for each window comes from the previous window's statistics.
EpisodeRecord RunEpisode(BandwidthEstimator& estimator, const TraceEntry& entry,
                         const EnvConfig& env_template, uint64_t env_seed);

struct Evaluation {
  MetricsSummary summary;
  std::vector<EpisodeRecord> episodes;
};

// Errors are rethrown with the trace id prepended.
Evaluation Evaluate(const std::string& name, const EstimatorFactory& factory,
                    const std::vector<TraceEntry>& traces,
                    const EvalConfig& cfg);

// Table-style comparison of two paired evaluations.
struct ComparisonTable {
  MetricsSummary a;
  MetricsSummary b;
  MetricsSummary delta;  // b - a, per column
};

// Throws ValidationError unless both ran on the same trace ids in the same
// order with equal step counts.
ComparisonTable Compare(const Evaluation& a, const Evaluation& b);

}  // namespace rtclab

#endif  // RTCLAB_EVAL_EVALUATE_H_
