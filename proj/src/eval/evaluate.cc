#include "rtclab/eval/evaluate.h"

#include <algorithm>
#include <exception>
#include <thread>

#include "rtclab/common/errors.h"

namespace rtclab {
namespace {

StepRecord ToRecord(const StepResult& r) {
  StepRecord s;
  s.time_ms = r.info.time_ms;
  s.capacity_kbps = r.info.capacity_kbps;
  s.estimate_kbps = r.info.estimate_kbps;
  s.receive_rate_kbps = r.info.window.receive_rate_kbps;
  s.rtt_ms = r.info.window.avg_rtt_ms;
  s.rtt_known = r.info.window.rtt_known;
  s.loss_rate = r.info.window.loss_rate;
  s.packets_received = r.info.window.packets_received;
  s.packets_lost = r.info.window.packets_lost;
  s.reward = r.reward;
  return s;
}

}  // namespace

uint64_t EpisodeSeed(uint64_t seed, std::size_t trace_index) {
  // splitmix64 of (seed, index)
  uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (trace_index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

EpisodeRecord RunEpisode(BandwidthEstimator& estimator, const TraceEntry& entry,
                         const EnvConfig& env_template, uint64_t env_seed) {
  EnvConfig cfg = env_template;
  cfg.trace = entry.trace;
  cfg.seed = env_seed;
  RtcEnv env;
  env.Reset(cfg);
  estimator.Reset();

  EpisodeRecord ep;
  ep.trace_id = entry.id;
  ep.steps.reserve(static_cast<std::size_t>(env.episode_steps()));
  ep.steps.push_back(ToRecord(env.last()));
  while (!env.done()) {
    const double estimate = estimator.Observe(env.last().info.window);
    ep.steps.push_back(ToRecord(env.StepBandwidth(estimate)));
  }
  ep.totals = env.call().totals();
  return ep;
}

Evaluation Evaluate(const std::string& name, const EstimatorFactory& factory,
                    const std::vector<TraceEntry>& traces,
                    const EvalConfig& cfg) {
  if (traces.empty())
    throw ValidationError("evaluation needs at least one trace");
  Evaluation out;
  out.episodes.resize(traces.size());
  std::vector<std::exception_ptr> errors(traces.size());

  auto run_range = [&](std::size_t worker, std::size_t workers) {
    for (std::size_t i = worker; i < traces.size(); i += workers) {
      try {
        auto est = factory(traces[i]);
        out.episodes[i] =
            RunEpisode(*est, traces[i], cfg.env, EpisodeSeed(cfg.seed, i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  const auto workers = static_cast<std::size_t>(
      std::clamp<int>(cfg.workers, 1, static_cast<int>(traces.size())));
  if (workers == 1) {
    run_range(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back(run_range, w, workers);
  }

  for (std::size_t i = 0; i < traces.size(); ++i) {
    if (!errors[i])
      continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const ValidationError& e) {
      throw ValidationError("trace " + traces[i].id + ": " + e.what());
    } catch (const std::exception& e) {
      throw std::runtime_error("trace " + traces[i].id + ": " + e.what());
    }
  }
  out.summary = Summarize(name, out.episodes);
  return out;
}

ComparisonTable Compare(const Evaluation& a, const Evaluation& b) {
  if (a.episodes.size() != b.episodes.size())
    throw ValidationError("compare: trace counts differ (" +
                          std::to_string(a.episodes.size()) + " vs " +
                          std::to_string(b.episodes.size()) + ")");
  for (std::size_t i = 0; i < a.episodes.size(); ++i) {
    if (a.episodes[i].trace_id != b.episodes[i].trace_id)
      throw ValidationError("compare: trace " + std::to_string(i) +
                            " differs (" + a.episodes[i].trace_id + " vs " +
                            b.episodes[i].trace_id + ")");
    if (a.episodes[i].steps.size() != b.episodes[i].steps.size())
      throw ValidationError("compare: step counts differ on trace " +
                            a.episodes[i].trace_id);
  }
  ComparisonTable t;
  t.a = a.summary;
  t.b = b.summary;
  t.delta.estimator = "delta(" + b.summary.estimator + "-" +
                      a.summary.estimator + ")";
  t.delta.utilization_pct = b.summary.utilization_pct - a.summary.utilization_pct;
  t.delta.rtt_avg_ms = b.summary.rtt_avg_ms - a.summary.rtt_avg_ms;
  t.delta.rtt_p50_ms = b.summary.rtt_p50_ms - a.summary.rtt_p50_ms;
  t.delta.rtt_p95_ms = b.summary.rtt_p95_ms - a.summary.rtt_p95_ms;
  t.delta.loss_pct = b.summary.loss_pct - a.summary.loss_pct;
  t.delta.reward_mean = b.summary.reward_mean - a.summary.reward_mean;
  t.delta.steps = 0;
  return t;
}

}  // namespace rtclab
