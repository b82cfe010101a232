// Acceptance runner: one PASS/FAIL line per criterion.
//   acceptance            run all criteria
//   acceptance 3 7        run the listed criteria

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "rtclab/env/rtc_env.h"
#include "rtclab/env/state_reward.h"
#include "rtclab/eval/evaluate.h"
#include "rtclab/eval/reference_estimators.h"
#include "rtclab/eval/report.h"
#include "rtclab/nn/checkpoint.h"
#include "rtclab/ppo/trainer.h"
#include "rtclab/trace/trace.h"
#include "rtclab/ukf/ukf_estimator.h"
#include "rtclab/ukf/unscented.h"
#include "support/netsim_properties.h"
#include "support/nn_oracles.h"

namespace rtclab {
namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void Check(bool ok, const std::string& what) {
    if (!ok) {
      if (pass)
        detail.clear();
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

std::string Fmt(const char* f, double a, double b = 0, double c = 0,
                double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), f, a, b, c, d);
  return buf;
}

std::shared_ptr<const NetworkTrace> ConstantTrace(double kbps,
                                                  int64_t duration_ms,
                                                  double owd_ms = 20.0) {
  return std::make_shared<NetworkTrace>(
      std::vector<TraceSegment>{{0, {kbps, owd_ms, 0.0}}}, duration_ms);
}

std::vector<TraceEntry> Corpus(int n, uint64_t first_seed, double lo,
                               double hi) {
  std::vector<TraceEntry> out;
  for (int i = 0; i < n; ++i) {
    TraceGenConfig g;
    g.capacity_kbps = {lo, hi};
    g.seed = first_seed + static_cast<uint64_t>(i);
    out.push_back({"trace_" + std::to_string(g.seed),
                   std::make_shared<NetworkTrace>(SampleTrace(g))});
  }
  return out;
}

// 1. Reward examples against an extended-precision evaluation.
Outcome RewardExactness() {
  struct Example {
    double r_kbps, d_ms, l;
    double listed;
  };
  const Example ex[] = {{0, 0, 0, 0.0},
                        {1000, 100, 0, 0.865664},
                        {500, 250, 0.1, -0.590833},
                        {8000, 0, 0, 2.097905}};
  Outcome o;
  double worst = 0.0;
  for (const Example& e : ex) {
    ObservationWindow w;
    w.receive_rate_kbps = e.r_kbps;
    w.avg_rtt_ms = e.d_ms;
    w.loss_rate = e.l;
    w.valid = true;
    const long double ref = 0.6L * std::log(4.0L * e.r_kbps / 1000.0L + 1.0L) -
                            e.d_ms / 1000.0L - 10.0L * e.l;
    const double err = std::abs(Reward(w) - static_cast<double>(ref));
    worst = std::max(worst, err);
    o.Check(err <= 1e-9, Fmt("R=%g kb/s: |err| %.3g", e.r_kbps, err));
    // Listed values carry six decimals.
    o.Check(std::abs(Reward(w) - e.listed) <= 1.5e-6,
            Fmt("R=%g kb/s: %.9f vs listed %.6f", e.r_kbps, Reward(w),
                e.listed));
  }
  if (o.pass)
    o.detail = Fmt("4 examples, max |err| %.2g", worst);
  return o;
}

// 2. Randomized simulator episodes against the reference FIFO link.
Outcome SimulatorProperties() {
  constexpr int kEpisodes = 1000;
  Outcome o;
  uint64_t packets = 0;
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 1; i <= kEpisodes && o.pass; ++i) {
    const testing::NetsimCheck c =
        testing::RunNetsimEpisodeTwice(static_cast<uint64_t>(i));
    packets += c.packets;
    o.Check(c.ok, "seed " + std::to_string(i) + ": " + c.failure);
  }
  const double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
  o.Check(secs < 120.0, Fmt("took %.1f s", secs));
  if (o.pass)
    o.detail = std::to_string(kEpisodes) + " episodes, " +
               std::to_string(packets) + " packets, " + Fmt("%.1f s", secs);
  return o;
}

// 3. Tape gradients vs central differences on every policy tensor.
Outcome GradientOracle() {
  Outcome o;
  double worst = 0.0;
  int tensors = 0;
  auto run = [&](const std::vector<testing::TensorGradError>& errs,
                 const std::string& tag) {
    for (const auto& e : errs) {
      ++tensors;
      worst = std::max(worst, e.rel_error);
      o.Check(e.rel_error < 1e-4,
              tag + " " + e.name + Fmt(": rel err %.3g", e.rel_error));
    }
  };
  for (uint64_t seed = 1; seed <= 3; ++seed)
    run(testing::PolicyGradientCheck(seed), "small/" + std::to_string(seed));
  nn::PolicyConfig full;
  full.seed = 7;
  run(testing::PolicyGradientCheck(full, 0.0), "default-size");
  if (o.pass)
    o.detail = std::to_string(tensors) + Fmt(" tensors, max rel err %.2g",
                                             worst);
  return o;
}

// 4. Vectorized GRU cell vs scalar loops.
Outcome GruEquivalence() {
  Outcome o;
  const double err = testing::GruOracleMaxError(2024, 100);
  o.Check(err <= 1e-12, Fmt("max |err| %.3g", err));
  if (o.pass)
    o.detail = Fmt("100 instances, max |err| %.2g", err);
  return o;
}

// 5. Unscented transform and filter convergence.
Outcome UkfSanity() {
  Outcome o;
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n01;
  UtParams ut;
  double worst_w = 0.0;
  double worst_rec = 0.0;
  for (int k = 0; k < 500; ++k) {
    const int n = 1 + k % 4;
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        a(i, j) = n01(rng) * (1 + k % 7);
    const Eigen::MatrixXd cov =
        a * a.transpose() + 0.1 * Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd mean(n);
    for (int i = 0; i < n; ++i)
      mean(i) = 100.0 * n01(rng);
    const SigmaPoints sp = ComputeSigmaPoints(mean, cov, ut);
    worst_w = std::max(worst_w, std::abs(sp.mean_weights.sum() - 1.0));
    Eigen::VectorXd m;
    Eigen::MatrixXd c;
    WeightedMoments(sp.points, sp.mean_weights, sp.cov_weights, m, c);
    const double scale = std::max(1.0, std::max(mean.cwiseAbs().maxCoeff(),
                                                cov.cwiseAbs().maxCoeff()));
    worst_rec = std::max(worst_rec, ((m - mean).cwiseAbs().maxCoeff()) / scale);
    worst_rec =
        std::max(worst_rec, ((c - cov).cwiseAbs().maxCoeff()) / scale);
  }
  o.Check(worst_w <= 1e-12, Fmt("weight sum err %.3g", worst_w));
  o.Check(worst_rec <= 1e-9, Fmt("reconstruction err %.3g", worst_rec));

  UkfState s;
  for (int i = 0; i < 100; ++i)
    UkfStep(s, Eigen::Vector2d(1000.0, 0.0), 1e9);
  const double rel = std::abs(s.mean(0) - 1000.0) / 1000.0;
  o.Check(rel <= 0.01, Fmt("bandwidth off by %.3g%%", 100 * rel));
  o.Check(std::abs(s.mean(1)) <= 0.01, Fmt("gradient %.3g", s.mean(1)));
  if (o.pass)
    o.detail = Fmt("weight err %.2g, recon err %.2g, converged to %.2f kb/s",
                   worst_w, worst_rec, s.mean(0));
  return o;
}

// 6. Ground-truth estimator on constant lossless 2 Mb/s.
Outcome OraclePipeline() {
  Outcome o;
  std::vector<TraceEntry> traces;
  for (int i = 0; i < 5; ++i)
    traces.push_back({"const_" + std::to_string(i),
                      ConstantTrace(2000.0, 60000, 10.0 + 15.0 * i)});
  EvalConfig cfg;
  const Evaluation ev = Evaluate(
      "oracle",
      [](const TraceEntry& e) {
        return std::make_unique<CapacityOracleEstimator>(e.trace);
      },
      traces, cfg);
  o.Check(ev.summary.utilization_pct >= 90.0,
          Fmt("utilization %.2f%%", ev.summary.utilization_pct));
  o.Check(ev.summary.loss_pct < 0.5, Fmt("loss %.3f%%", ev.summary.loss_pct));
  if (o.pass)
    o.detail = Fmt("utilization %.2f%%, loss %.3f%%",
                   ev.summary.utilization_pct, ev.summary.loss_pct);
  return o;
}

// 7. Smoke training on a 50-trace corpus, judged on 10 held-out traces.
Outcome SmokeTraining() {
  Outcome o;
  const std::vector<TraceEntry> corpus = Corpus(50, 1000, 500.0, 4000.0);
  const std::vector<TraceEntry> held_out = Corpus(10, 2000, 500.0, 4000.0);

  TrainConfig cfg;
  cfg.seed = 1;
  cfg.iterations = 150;
  cfg.max_env_steps = 2'000'000;
  cfg.ppo.workers = 1;
  cfg.ppo.adam.lr = 3e-4;
  cfg.eval_traces = held_out;
  cfg.eval_interval = 10;
  cfg.eval_seed = 1;

  nn::PolicyConfig init_cfg = cfg.ppo.policy;
  init_cfg.seed = cfg.seed;
  const MetricsSummary before =
      EvaluatePolicy(nn::PolicyParams::Init(init_cfg), held_out, cfg.env,
                     cfg.eval_seed, 1)
          .summary;

  const auto t0 = std::chrono::steady_clock::now();
  const TrainResult r = Train(cfg, corpus);
  const double mins = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - t0)
                          .count() /
                      60.0;
  const MetricsSummary after =
      EvaluatePolicy(r.best_params, held_out, cfg.env, cfg.eval_seed, 1)
          .summary;

  o.Check(r.env_steps <= 2'000'000,
          "used " + std::to_string(r.env_steps) + " steps");
  o.Check(after.reward_mean - before.reward_mean >= 0.2,
          Fmt("reward %.3f vs untrained %.3f", after.reward_mean,
              before.reward_mean));
  o.Check(after.utilization_pct >= 60.0,
          Fmt("utilization %.2f%%", after.utilization_pct));
  o.Check(after.loss_pct <= 2.0, Fmt("loss %.3f%%", after.loss_pct));
  std::ostringstream d;
  d << r.env_steps << " steps in "
    << Fmt("%.1f min; held-out reward %.3f (untrained %.3f), "
           "utilization %.2f%%, ",
           mins, after.reward_mean, before.reward_mean, after.utilization_pct)
    << Fmt("loss %.3f%%", after.loss_pct);
  if (o.pass)
    o.detail = d.str();
  else
    o.detail += " [" + d.str() + "]";
  return o;
}

// 8. compare(UKF, UKF) and the output schema.
Outcome PairedHarness() {
  Outcome o;
  const std::vector<TraceEntry> traces = Corpus(8, 3000, 300.0, 8000.0);
  EvalConfig cfg;
  cfg.seed = 11;
  const EstimatorFactory ukf = [](const TraceEntry&) {
    return std::make_unique<UkfEstimator>();
  };
  cfg.workers = 1;
  const Evaluation a = Evaluate("ukf", ukf, traces, cfg);
  cfg.workers = 3;
  const Evaluation b = Evaluate("ukf", ukf, traces, cfg);
  const ComparisonTable t = Compare(a, b);
  const double deltas[] = {t.delta.utilization_pct, t.delta.rtt_avg_ms,
                           t.delta.rtt_p50_ms,      t.delta.rtt_p95_ms,
                           t.delta.loss_pct,        t.delta.reward_mean};
  for (double v : deltas)
    o.Check(v == 0.0, Fmt("non-zero delta %.3g", v));

  std::ostringstream csv;
  WriteComparisonCsv(csv, t);
  std::vector<std::string> lines;
  std::istringstream in(csv.str());
  for (std::string line; std::getline(in, line);)
    lines.push_back(line);
  o.Check(lines.size() == 4, "expected 4 CSV lines, got " +
                                 std::to_string(lines.size()));
  o.Check(!lines.empty() &&
              lines[0] ==
                  "estimator,utilization_pct,rtt_avg_ms,rtt_p50_ms,"
                  "rtt_p95_ms,loss_pct,reward_mean",
          "header mismatch");
  o.Check(lines.size() == 4 && lines[1] == lines[2], "estimator rows differ");
  o.Check(lines.size() == 4 && lines[3] == "delta(ukf-ukf),0,0,0,0,0,0",
          "delta row: " + (lines.size() == 4 ? lines[3] : std::string()));
  if (o.pass)
    o.detail = "8 traces, " + std::to_string(a.summary.steps) +
               " paired steps, all deltas 0";
  return o;
}

// 9. Simulated time vs wall time for one call at 2 Mb/s.
Outcome Performance() {
  Outcome o;
  const TraceEntry entry{"const_2000", ConstantTrace(2000.0, 300000)};
  UkfEstimator est;
  EnvConfig env;
  RunEpisode(est, entry, env, 1);  // warm caches
  const auto t0 = std::chrono::steady_clock::now();
  constexpr int kReps = 3;
  for (int i = 0; i < kReps; ++i)
    RunEpisode(est, entry, env, 1 + i);
  const double wall = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
  const double ratio = kReps * 300.0 / wall;
  o.Check(ratio >= 100.0, Fmt("only %.1fx real time", ratio));
  if (o.pass)
    o.detail = Fmt("%.0fx real time (%.0f s simulated in %.3f s)", ratio,
                   kReps * 300.0, wall);
  return o;
}

// 10. Trace and checkpoint round trips.
Outcome RoundTrips() {
  Outcome o;
  int traces = 0;
  for (uint64_t seed = 1; seed <= 500 && o.pass; ++seed) {
    TraceGenConfig g;
    g.seed = seed;
    g.duration_s = 10.0 + static_cast<double>(seed % 7) * 20.0;
    const NetworkTrace t = SampleTrace(g);
    const std::string text = SerializeTrace(t);
    const NetworkTrace back = ParseTrace(text);
    o.Check(back == t, "trace seed " + std::to_string(seed) + " differs");
    o.Check(SerializeTrace(back) == text,
            "trace seed " + std::to_string(seed) + " re-serializes differently");
    ++traces;
  }

  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() /
      ("rtclab_accept_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  std::mt19937_64 rng(10);
  std::uniform_int_distribution<int> dim(1, 24);
  std::uniform_int_distribution<uint64_t> bits;
  int checkpoints = 0;
  for (int k = 0; k < 50 && o.pass; ++k) {
    nn::PolicyConfig pc;
    pc.trunk_size = static_cast<std::size_t>(dim(rng));
    pc.hidden_size = static_cast<std::size_t>(dim(rng));
    pc.seed = static_cast<uint64_t>(k);
    nn::PolicyParams p = nn::PolicyParams::Init(pc);
    // Arbitrary finite bit patterns, subnormals included.
    for (nn::Parameter* t : p.All())
      for (double& v : t->value.values()) {
        double x;
        do {
          x = std::bit_cast<double>(bits(rng));
        } while (!std::isfinite(x));
        v = x;
      }
    const std::string path = (dir / "p.ckpt").string();
    nn::SaveCheckpoint(path, p);
    const nn::PolicyParams q = nn::LoadCheckpoint(path);
    const auto a = nn::PolicyToTensors(p);
    const auto b = nn::PolicyToTensors(q);
    bool same = a.size() == b.size();
    for (std::size_t i = 0; same && i < a.size(); ++i) {
      same = a[i].name == b[i].name &&
             a[i].value.rows() == b[i].value.rows() &&
             a[i].value.cols() == b[i].value.cols();
      for (std::size_t j = 0; same && j < a[i].value.size(); ++j)
        same = std::bit_cast<uint64_t>(a[i].value[j]) ==
               std::bit_cast<uint64_t>(b[i].value[j]);
    }
    o.Check(same, "checkpoint " + std::to_string(k) + " differs");
    std::ostringstream s1;
    std::ostringstream s2;
    nn::WriteTensors(s1, a);
    nn::WriteTensors(s2, b);
    o.Check(s1.str() == s2.str(),
            "checkpoint " + std::to_string(k) + " re-saves differently");
    ++checkpoints;
  }
  std::filesystem::remove_all(dir);
  if (o.pass)
    o.detail = std::to_string(traces) + " traces, " +
               std::to_string(checkpoints) + " checkpoints bit-identical";
  return o;
}

struct Criterion {
  const char* title;
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace rtclab

int main(int argc, char** argv) {
  using rtclab::Criterion;
  const std::map<int, Criterion> criteria = {
      {1, {"reward formula exactness", rtclab::RewardExactness}},
      {2, {"simulator conservation and delay bounds",
           rtclab::SimulatorProperties}},
      {3, {"policy gradient oracle", rtclab::GradientOracle}},
      {4, {"GRU equivalence", rtclab::GruEquivalence}},
      {5, {"UKF sanity", rtclab::UkfSanity}},
      {6, {"oracle pipeline utilization", rtclab::OraclePipeline}},
      {7, {"smoke training", rtclab::SmokeTraining}},
      {8, {"paired A/B harness integrity", rtclab::PairedHarness}},
      {9, {"simulation speed", rtclab::Performance}},
      {10, {"trace and checkpoint round trips", rtclab::RoundTrips}},
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const int id = std::atoi(argv[i]);
    if (!criteria.count(id)) {
      std::fprintf(stderr, "unknown criterion '%s' (1-10)\n", argv[i]);
      return 2;
    }
    selected.push_back(id);
  }
  if (selected.empty())
    for (const auto& [id, c] : criteria)
      selected.push_back(id);

  int failures = 0;
  for (int id : selected) {
    const Criterion& c = criteria.at(id);
    rtclab::Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
    std::printf("AC%-2d %s  %s: %s (%.1fs)\n", id, o.pass ? "PASS" : "FAIL",
                c.title, o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
