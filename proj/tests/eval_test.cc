#include <cmath>
#include <memory>
#include <random>
#include <sstream>

#include "gtest/gtest.h"
#include "rtclab/common/errors.h"
#include "rtclab/eval/evaluate.h"
#include "rtclab/eval/metrics.h"
#include "rtclab/eval/reference_estimators.h"
#include "rtclab/eval/report.h"
#include "rtclab/ukf/ukf_estimator.h"

namespace rtclab {
namespace {

TraceEntry ConstantEntry(const std::string& id, double kbps, int64_t ms,
                         double owd = 20.0, double loss = 0.0) {
  return {id, std::make_shared<NetworkTrace>(
                  std::vector<TraceSegment>{{0, {kbps, owd, loss}}}, ms)};
}

EpisodeRecord Synthetic(const std::string& id,
                        const std::vector<std::pair<double, double>>& rc) {
  EpisodeRecord ep;
  ep.trace_id = id;
  for (const auto& [r, c] : rc) {
    StepRecord s;
    s.receive_rate_kbps = r;
    s.capacity_kbps = c;
    ep.steps.push_back(s);
  }
  return ep;
}

EstimatorFactory Ukf() {
  return [](const TraceEntry&) { return std::make_unique<UkfEstimator>(); };
}

EstimatorFactory Oracle() {
  return [](const TraceEntry& e) {
    return std::make_unique<CapacityOracleEstimator>(e.trace);
  };
}

EstimatorFactory Fixed(double kbps) {
  return [kbps](const TraceEntry&) {
    return std::make_unique<ConstantEstimator>(kbps);
  };
}

std::vector<TraceEntry> SampledTraces(int n, uint64_t seed,
                                      double duration_s = 20.0) {
  std::vector<TraceEntry> out;
  for (int i = 0; i < n; ++i) {
    TraceGenConfig g;
    g.seed = seed + static_cast<uint64_t>(i);
    g.duration_s = duration_s;
    out.push_back({"s" + std::to_string(i),
                   std::make_shared<NetworkTrace>(SampleTrace(g))});
  }
  return out;
}

void ExpectSameSummary(const MetricsSummary& a, const MetricsSummary& b) {
  EXPECT_EQ(a.utilization_pct, b.utilization_pct);
  EXPECT_EQ(a.rtt_avg_ms, b.rtt_avg_ms);
  EXPECT_EQ(a.rtt_p50_ms, b.rtt_p50_ms);
  EXPECT_EQ(a.rtt_p95_ms, b.rtt_p95_ms);
  EXPECT_EQ(a.loss_pct, b.loss_pct);
  EXPECT_EQ(a.reward_mean, b.reward_mean);
  EXPECT_EQ(a.steps, b.steps);
}

TEST(UtilizationTest, Examples) {
  EXPECT_DOUBLE_EQ(Utilization(Synthetic("a", {{2000, 2000}, {500, 500}})),
                   100.0);
  EXPECT_DOUBLE_EQ(Utilization(Synthetic("a", {{1500, 2000}, {1500, 2000}})),
                   75.0);
  EXPECT_DOUBLE_EQ(Utilization(Synthetic("a", {{0, 2000}})), 0.0);
  // Ratio of sums, not mean of ratios.
  EXPECT_DOUBLE_EQ(Utilization(Synthetic("a", {{1000, 1000}, {0, 3000}})),
                   25.0);
}

TEST(UtilizationTest, Errors) {
  EXPECT_THROW(Utilization(Synthetic("a", {})), ValidationError);
  EXPECT_THROW(Utilization(Synthetic("a", {{0, 0}, {0, 0}})), ValidationError);
}

TEST(PercentileTest, NearestRankExamples) {
  std::vector<double> v(100);
  for (int i = 0; i < 100; ++i)
    v[static_cast<std::size_t>(i)] = 100 - i;  // unsorted input
  EXPECT_EQ(Percentile(v, 50), 50);
  EXPECT_EQ(Percentile(v, 95), 95);
  EXPECT_EQ(Percentile(v, 0), 1);
  EXPECT_EQ(Percentile(v, 100), 100);
  EXPECT_EQ(Percentile(v, 50.5), 51);
  for (double p : {0.0, 13.0, 50.0, 99.9, 100.0})
    EXPECT_EQ(Percentile({7.5}, p), 7.5);
}

TEST(PercentileTest, Errors) {
  EXPECT_THROW(Percentile({}, 50), ValidationError);
  EXPECT_THROW(Percentile({1.0}, -1), ValidationError);
  EXPECT_THROW(Percentile({1.0}, 100.5), ValidationError);
}

TEST(PercentileTest, MonotoneInP) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd(50.0, 20.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> v(1 + trial * 7);
    for (double& x : v)
      x = nd(rng);
    double prev = -INFINITY;
    for (double p = 0.0; p <= 100.0; p += 0.5) {
      const double q = Percentile(v, p);
      ASSERT_GE(q, prev);
      prev = q;
    }
  }
}

TEST(SummarizeTest, PoolsStepsAcrossEpisodes) {
  EpisodeRecord a = Synthetic("a", {{1000, 2000}, {1000, 2000}});
  EpisodeRecord b = Synthetic("b", {{3000, 4000}});
  a.steps[0].rtt_known = false;
  a.steps[0].rtt_ms = 999.0;
  a.steps[1].rtt_known = true;
  a.steps[1].rtt_ms = 40.0;
  b.steps[0].rtt_known = true;
  b.steps[0].rtt_ms = 80.0;
  a.steps[0].packets_received = 90;
  a.steps[0].packets_lost = 10;
  b.steps[0].packets_received = 300;
  a.steps[0].reward = 1.0;
  a.steps[1].reward = 2.0;
  b.steps[0].reward = -6.0;
  const std::vector<EpisodeRecord> eps{a, b};
  const MetricsSummary m = Summarize("x", eps);
  EXPECT_EQ(m.estimator, "x");
  EXPECT_DOUBLE_EQ(m.utilization_pct, 100.0 * 5000.0 / 8000.0);
  EXPECT_DOUBLE_EQ(m.rtt_avg_ms, 60.0);
  EXPECT_DOUBLE_EQ(m.rtt_p50_ms, 40.0);
  EXPECT_DOUBLE_EQ(m.rtt_p95_ms, 80.0);
  EXPECT_DOUBLE_EQ(m.loss_pct, 2.5);
  EXPECT_DOUBLE_EQ(m.reward_mean, -1.0);
  EXPECT_EQ(m.steps, 3u);
  EXPECT_LE(m.rtt_p50_ms, m.rtt_p95_ms);
}

TEST(EvaluateTest, OracleOnLosslessConstantLinks) {
  const std::vector<TraceEntry> traces{ConstantEntry("c0", 2000, 30000),
                                       ConstantEntry("c1", 2000, 30000, 50)};
  const Evaluation ev = Evaluate("oracle", Oracle(), traces, {});
  EXPECT_GE(ev.summary.utilization_pct, 90.0);
  EXPECT_LE(ev.summary.utilization_pct, 100.5);
  EXPECT_LT(ev.summary.loss_pct, 0.5);
  for (const EpisodeRecord& ep : ev.episodes)
    EXPECT_EQ(ep.steps.size(), 600u);
}

TEST(EvaluateTest, FloorEstimatorSendsOnlyTheMediaFloor) {
  const std::vector<TraceEntry> traces{ConstantEntry("c", 2000, 10000)};
  const Evaluation ev = Evaluate("floor", Fixed(0.0), traces, {});
  // Audio plus minimum-size video frames; the 300 kb/s warm-up adds a bit.
  const SenderConfig s;
  const double floor_kbps =
      s.audio_packets_per_s * s.audio_packet_bytes * 8.0 / 1000.0 +
      (1000.0 / s.frame_interval_ms) * s.min_frame_bytes * 8.0 / 1000.0;
  EXPECT_GE(ev.summary.utilization_pct, 100.0 * floor_kbps / 2000.0 - 0.1);
  EXPECT_LE(ev.summary.utilization_pct, 100.0 * floor_kbps / 2000.0 + 0.5);
  EXPECT_EQ(ev.summary.loss_pct, 0.0);
}

TEST(EvaluateTest, PairedAndDeterministic) {
  const auto traces = SampledTraces(4, 100);
  EvalConfig cfg;
  cfg.seed = 5;
  const Evaluation a = Evaluate("ukf", Ukf(), traces, cfg);
  const Evaluation b = Evaluate("ukf", Ukf(), traces, cfg);
  cfg.workers = 3;
  const Evaluation c = Evaluate("ukf", Ukf(), traces, cfg);
  ExpectSameSummary(a.summary, b.summary);
  ExpectSameSummary(a.summary, c.summary);
  cfg.seed = 6;
  const Evaluation d = Evaluate("ukf", Ukf(), traces, cfg);
  EXPECT_NE(a.summary.reward_mean, d.summary.reward_mean);
}

TEST(EvaluateTest, StepCountFollowsDuration) {
  const std::vector<TraceEntry> traces{ConstantEntry("a", 1000, 1234),
                                       ConstantEntry("b", 1000, 5000)};
  const Evaluation ev = Evaluate("ukf", Ukf(), traces, {});
  EXPECT_EQ(ev.episodes[0].steps.size(), 24u);
  EXPECT_EQ(ev.episodes[1].steps.size(), 100u);
  EXPECT_EQ(ev.episodes[0].trace_id, "a");
}

TEST(EvaluateTest, UtilizationBoundedByCapacityPlusOnePacketPerStep) {
  const auto traces = SampledTraces(12, 300);
  for (const EstimatorFactory& f : {Ukf(), Fixed(8000.0), Oracle()}) {
    const Evaluation ev = Evaluate("x", f, traces, {});
    for (const EpisodeRecord& ep : ev.episodes) {
      double cap = 0.0;
      for (const StepRecord& s : ep.steps)
        cap += s.capacity_kbps;
      const double slack_kbps = 1200.0 * 8.0 / 50.0;  // one packet per step
      const double bound =
          100.0 + 100.0 * slack_kbps * static_cast<double>(ep.steps.size()) /
                      cap;
      EXPECT_LE(Utilization(ep), bound) << ep.trace_id;
    }
  }
}

TEST(EvaluateTest, ErrorsCarryTraceId) {
  const std::vector<TraceEntry> traces{ConstantEntry("good", 1000, 1000),
                                       ConstantEntry("bad", 1000, 1000)};
  EstimatorFactory f = [](const TraceEntry& e) -> std::unique_ptr<BandwidthEstimator> {
    if (e.id == "bad")
      throw ValidationError("refused");
    return std::make_unique<ConstantEstimator>(500.0);
  };
  try {
    Evaluate("x", f, traces, {});
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("bad"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("refused"), std::string::npos);
  }
  EXPECT_THROW(Evaluate("x", f, {}, {}), ValidationError);
}

TEST(CompareTest, SameEstimatorGivesZeroDeltas) {
  const auto traces = SampledTraces(3, 7);
  const Evaluation a = Evaluate("ukf", Ukf(), traces, {});
  const Evaluation b = Evaluate("ukf", Ukf(), traces, {});
  const ComparisonTable t = Compare(a, b);
  EXPECT_EQ(t.delta.utilization_pct, 0.0);
  EXPECT_EQ(t.delta.rtt_avg_ms, 0.0);
  EXPECT_EQ(t.delta.rtt_p50_ms, 0.0);
  EXPECT_EQ(t.delta.rtt_p95_ms, 0.0);
  EXPECT_EQ(t.delta.loss_pct, 0.0);
  EXPECT_EQ(t.delta.reward_mean, 0.0);
}

TEST(CompareTest, SyntheticDeltasMatchHandArithmetic) {
  Evaluation a;
  Evaluation b;
  a.episodes = {Synthetic("t", {{1000, 2000}, {500, 2000}})};
  b.episodes = {Synthetic("t", {{1800, 2000}, {1400, 2000}})};
  a.episodes[0].steps[0].reward = 0.2;
  a.episodes[0].steps[1].reward = 0.4;
  b.episodes[0].steps[0].reward = 0.5;
  b.episodes[0].steps[1].reward = 0.9;
  a.summary = Summarize("a", a.episodes);
  b.summary = Summarize("b", b.episodes);
  const ComparisonTable t = Compare(a, b);
  EXPECT_DOUBLE_EQ(a.summary.utilization_pct, 37.5);
  EXPECT_DOUBLE_EQ(b.summary.utilization_pct, 80.0);
  EXPECT_DOUBLE_EQ(t.delta.utilization_pct, 42.5);
  EXPECT_NEAR(t.delta.reward_mean, 0.4, 1e-15);
  EXPECT_EQ(t.delta.estimator, "delta(b-a)");
}

TEST(CompareTest, MismatchedTraceSetsRejected) {
  Evaluation a;
  Evaluation b;
  a.episodes = {Synthetic("t1", {{1, 1}}), Synthetic("t2", {{1, 1}})};
  b.episodes = {Synthetic("t1", {{1, 1}})};
  EXPECT_THROW(Compare(a, b), ValidationError);
  b.episodes.push_back(Synthetic("t3", {{1, 1}}));
  EXPECT_THROW(Compare(a, b), ValidationError);
  b.episodes[1] = Synthetic("t2", {{1, 1}, {1, 1}});
  EXPECT_THROW(Compare(a, b), ValidationError);
}

TEST(ReportTest, ComparisonCsvSchema) {
  const auto traces = SampledTraces(2, 9, 5.0);
  const Evaluation a = Evaluate("ukf", Ukf(), traces, {});
  const Evaluation b = Evaluate("oracle", Oracle(), traces, {});
  std::ostringstream os;
  WriteComparisonCsv(os, Compare(a, b));
  std::istringstream in(os.str());
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line))
    lines.push_back(line);
  ASSERT_EQ(lines.size(), 4u);
  EXPECT_EQ(lines[0],
            "estimator,utilization_pct,rtt_avg_ms,rtt_p50_ms,rtt_p95_ms,"
            "loss_pct,reward_mean");
  EXPECT_EQ(lines[1].rfind("ukf,", 0), 0u);
  EXPECT_EQ(lines[2].rfind("oracle,", 0), 0u);
  EXPECT_EQ(lines[3].rfind("delta(oracle-ukf),", 0), 0u);
  for (const std::string& l : lines)
    EXPECT_EQ(std::count(l.begin(), l.end(), ','), 6) << l;
}

TEST(ReportTest, SeriesCsvOneRowPerStep) {
  const std::vector<TraceEntry> traces{ConstantEntry("a", 1500, 2000)};
  const Evaluation ev = Evaluate("ukf", Ukf(), traces, {});
  std::ostringstream os;
  WriteSeriesCsv(os, ev.episodes[0]);
  const std::string text = os.str();
  EXPECT_EQ(text.rfind(std::string(kSeriesHeader) + "\n", 0), 0u);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 41);
}

TEST(ReportTest, FormatNumberRoundTrips) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng) / (1 + i);
    EXPECT_EQ(std::stod(FormatNumber(v)), v);
  }
  EXPECT_EQ(FormatNumber(0.5), "0.5");
  EXPECT_EQ(FormatNumber(100.0), "100");
}

TEST(OracleEstimatorTest, ReportsNextWindowCapacity) {
  auto trace = std::make_shared<NetworkTrace>(
      std::vector<TraceSegment>{{0, {1000, 20, 0}}, {75, {3000, 20, 0}}},
      1000);
  CapacityOracleEstimator est(trace);
  ObservationWindow w;
  // Window 1 is [50, 100): half at 1000, half at 3000.
  EXPECT_DOUBLE_EQ(est.Observe(w), 2000.0);
  EXPECT_DOUBLE_EQ(est.Observe(w), 3000.0);
  est.Reset();
  EXPECT_DOUBLE_EQ(est.Observe(w), 2000.0);
}

}  // namespace
}  // namespace rtclab
