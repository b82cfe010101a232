#include "rtclab/eval/report.h"

#include <array>
#include <charconv>
#include <fstream>
#include <stdexcept>

namespace rtclab {
namespace {

void WriteRow(std::ostream& os, const MetricsSummary& m) {
  os << m.estimator << ',' << FormatNumber(m.utilization_pct) << ','
     << FormatNumber(m.rtt_avg_ms) << ',' << FormatNumber(m.rtt_p50_ms) << ','
     << FormatNumber(m.rtt_p95_ms) << ',' << FormatNumber(m.loss_pct) << ','
     << FormatNumber(m.reward_mean) << '\n';
}

template <typename Fn>
void WriteFile(const std::filesystem::path& path, Fn&& fn) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os)
    throw std::runtime_error(path.string() + ": cannot open for writing");
  fn(os);
  os.flush();
  if (!os)
    throw std::runtime_error(path.string() + ": write failed");
}

}  // namespace

std::string FormatNumber(double v) {
  std::array<char, 64> buf;
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc())
    return "nan";
  return std::string(buf.data(), end);
}

void WriteSummaryCsv(std::ostream& os, std::span<const MetricsSummary> rows) {
  os << kSummaryHeader << '\n';
  for (const MetricsSummary& m : rows)
    WriteRow(os, m);
}

void WriteComparisonCsv(std::ostream& os, const ComparisonTable& table) {
  os << kSummaryHeader << '\n';
  WriteRow(os, table.a);
  WriteRow(os, table.b);
  WriteRow(os, table.delta);
}

void WriteSeriesCsv(std::ostream& os, const EpisodeRecord& ep) {
  os << kSeriesHeader << '\n';
  for (const StepRecord& s : ep.steps) {
    os << FormatNumber(s.time_ms) << ',' << FormatNumber(s.capacity_kbps)
       << ',' << FormatNumber(s.estimate_kbps) << ','
       << FormatNumber(s.receive_rate_kbps) << ','
       << (s.rtt_known ? FormatNumber(s.rtt_ms) : std::string()) << ','
       << FormatNumber(s.loss_rate) << '\n';
  }
}

void WriteSummaryCsv(const std::filesystem::path& path,
                     std::span<const MetricsSummary> rows) {
  WriteFile(path, [&](std::ostream& os) { WriteSummaryCsv(os, rows); });
}

void WriteComparisonCsv(const std::filesystem::path& path,
                        const ComparisonTable& table) {
  WriteFile(path, [&](std::ostream& os) { WriteComparisonCsv(os, table); });
}

void WriteSeriesCsv(const std::filesystem::path& path, const EpisodeRecord& ep) {
  WriteFile(path, [&](std::ostream& os) { WriteSeriesCsv(os, ep); });
}

}  // namespace rtclab
