#ifndef RTCLAB_EVAL_REPORT_H_
#define RTCLAB_EVAL_REPORT_H_

#include <filesystem>
#include <ostream>
#include <span>
#include <string>

#include "rtclab/eval/evaluate.h"
#include "rtclab/eval/metrics.h"

namespace rtclab {

inline constexpr char kSummaryHeader[] =
    "estimator,utilization_pct,rtt_avg_ms,rtt_p50_ms,rtt_p95_ms,loss_pct,"
    "reward_mean";
inline constexpr char kSeriesHeader[] =
    "time_ms,capacity_kbps,estimate_kbps,receive_rate_kbps,rtt_ms,loss_rate";

// Shortest representation that parses back to the same double.
std::string FormatNumber(double v);

void WriteSummaryCsv(std::ostream& os, std::span<const MetricsSummary> rows);
// Two estimator rows, then one delta row.
void WriteComparisonCsv(std::ostream& os, const ComparisonTable& table);
void WriteSeriesCsv(std::ostream& os, const EpisodeRecord& ep);

// File variants; IO failures throw std::runtime_error naming the path.
void WriteSummaryCsv(const std::filesystem::path& path,
                     std::span<const MetricsSummary> rows);
void WriteComparisonCsv(const std::filesystem::path& path,
                        const ComparisonTable& table);
void WriteSeriesCsv(const std::filesystem::path& path, const EpisodeRecord& ep);

}  // namespace rtclab

#endif  // RTCLAB_EVAL_REPORT_H_
