#include "rtclab/cli/commands.h"

#include <filesystem>
#include <memory>

#include "rtclab/common/errors.h"
#include "rtclab/eval/reference_estimators.h"
#include "rtclab/eval/report.h"
#include "rtclab/nn/checkpoint.h"
#include "rtclab/ppo/policy_estimator.h"
#include "rtclab/ppo/trainer.h"
#include "rtclab/ukf/ukf_estimator.h"

namespace rtclab::cli {
namespace fs = std::filesystem;
namespace {

fs::path OutDir(const RunConfig& run) {
  const fs::path out = run.out_dir.empty() ? fs::path(".") : fs::path(run.out_dir);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec)
    throw std::runtime_error("cannot create output directory " +
                             out.string() + ": " + ec.message());
  return out;
}

std::vector<TraceEntry> RequireTraces(const std::string& dir,
                                      const std::string& cmd) {
  if (dir.empty())
    throw ValidationError(cmd + " needs --traces <dir>");
  return LoadTraceDir(dir);
}

void LogSummary(std::ostream& log, const MetricsSummary& m) {
  log << m.estimator << ": utilization " << FormatNumber(m.utilization_pct)
      << "%, rtt avg/p50/p95 " << FormatNumber(m.rtt_avg_ms) << '/'
      << FormatNumber(m.rtt_p50_ms) << '/' << FormatNumber(m.rtt_p95_ms)
      << " ms, loss " << FormatNumber(m.loss_pct) << "%, reward "
      << FormatNumber(m.reward_mean) << '\n';
}

void WriteSeries(const fs::path& dir, const Evaluation& ev) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec)
    throw std::runtime_error("cannot create " + dir.string() + ": " +
                             ec.message());
  for (const EpisodeRecord& ep : ev.episodes)
    WriteSeriesCsv(dir / (ep.trace_id + ".csv"), ep);
}

}  // namespace

EstimatorFactory MakeEstimatorFactory(const std::string& name,
                                      const RunConfig& run,
                                      const Settings& settings) {
  if (name == "ukf") {
    UkfEstimatorConfig cfg = settings.ukf;
    return [cfg](const TraceEntry&) {
      return std::make_unique<UkfEstimator>(cfg);
    };
  }
  if (name == "policy") {
    if (run.checkpoint.empty())
      throw ValidationError("the policy estimator needs --checkpoint");
    auto params = std::make_shared<const nn::PolicyParams>(
        nn::LoadCheckpoint(run.checkpoint));
    const StateScaling scaling = settings.env.scaling;
    const ActionMap map = settings.env.action_map;
    return [params, scaling, map](const TraceEntry&) {
      return std::make_unique<PolicyEstimator>(params, scaling, map);
    };
  }
  if (name == "oracle") {
    const double step = settings.env.step_len_ms;
    return [step](const TraceEntry& e) {
      return std::make_unique<CapacityOracleEstimator>(e.trace, step);
    };
  }
  if (name == "constant") {
    const double kbps = settings.constant_kbps;
    return [kbps](const TraceEntry&) {
      return std::make_unique<ConstantEstimator>(kbps);
    };
  }
  throw ValidationError("unknown estimator '" + name +
                        "' (expected ukf, policy, oracle or constant)");
}

std::string TraceFileName(uint64_t seed, int idx) {
  return "trace_" + std::to_string(seed) + "_" + std::to_string(idx) + ".txt";
}

void CmdGenTraces(const RunConfig& run, const Settings& s, std::ostream& log) {
  if (run.count < 1)
    throw ValidationError("--count must be >= 1");
  ValidateTraceGenConfig(s.gen);
  const fs::path out = OutDir(run);
  for (int i = 0; i < run.count; ++i) {
    TraceGenConfig g = s.gen;
    g.seed = EpisodeSeed(run.seed, static_cast<std::size_t>(i));
    WriteTraceFile((out / TraceFileName(run.seed, i)).string(), SampleTrace(g));
  }
  log << "wrote " << run.count << " traces to " << out.string() << '\n';
}

void CmdTrain(const RunConfig& run, const Settings& s, std::ostream& log) {
  const std::vector<TraceEntry> corpus = RequireTraces(run.traces_dir, "train");
  TrainConfig cfg = s.train;
  cfg.env = s.env;
  cfg.seed = run.seed;
  cfg.eval_seed = run.seed;
  if (!run.eval_traces_dir.empty())
    cfg.eval_traces = LoadTraceDir(run.eval_traces_dir);
  const fs::path out = OutDir(run);
  cfg.checkpoint_path = run.checkpoint.empty()
                            ? (out / "policy.ckpt").string()
                            : run.checkpoint;
  cfg.log_path = (out / "train_log.csv").string();

  const TrainResult r = Train(cfg, corpus, [&](const TrainLogRow& row) {
    if (row.iteration % 10 == 0)
      log << "iteration " << row.iteration << " steps " << row.steps
          << " mean_reward " << FormatNumber(row.mean_reward) << '\n';
  });
  log << "trained " << r.log.size() << " iterations, " << r.env_steps
      << " environment steps";
  if (r.best_eval_reward)
    log << ", best eval reward " << FormatNumber(*r.best_eval_reward);
  log << "\ncheckpoint " << cfg.checkpoint_path << "\nlog " << cfg.log_path
      << '\n';
}

void CmdEval(const RunConfig& run, const Settings& s, std::ostream& log) {
  const std::vector<TraceEntry> traces = RequireTraces(run.traces_dir, "eval");
  const EstimatorFactory factory = MakeEstimatorFactory(run.estimator, run, s);
  const EvalConfig cfg{s.env, run.seed, s.eval_workers};
  const Evaluation ev = Evaluate(run.estimator, factory, traces, cfg);
  const fs::path out = OutDir(run);
  const MetricsSummary rows[] = {ev.summary};
  WriteSummaryCsv(out / "summary.csv", rows);
  if (run.emit_series)
    WriteSeries(out / "series" / run.estimator, ev);
  LogSummary(log, ev.summary);
}

void CmdCompare(const RunConfig& run, const Settings& s, std::ostream& log) {
  const std::vector<TraceEntry> traces =
      RequireTraces(run.traces_dir, "compare");
  const EstimatorFactory fa = MakeEstimatorFactory(run.estimator_a, run, s);
  const EstimatorFactory fb = MakeEstimatorFactory(run.estimator_b, run, s);
  const EvalConfig cfg{s.env, run.seed, s.eval_workers};
  const Evaluation a = Evaluate(run.estimator_a, fa, traces, cfg);
  const Evaluation b = Evaluate(run.estimator_b, fb, traces, cfg);
  const ComparisonTable table = Compare(a, b);
  const fs::path out = OutDir(run);
  WriteComparisonCsv(out / "compare.csv", table);
  if (run.emit_series) {
    WriteSeries(out / "series" / ("a_" + run.estimator_a), a);
    WriteSeries(out / "series" / ("b_" + run.estimator_b), b);
  }
  LogSummary(log, table.a);
  LogSummary(log, table.b);
  LogSummary(log, table.delta);
}

void CmdReplay(const RunConfig& run, const Settings& s, std::ostream& log) {
  if (run.trace_file.empty())
    throw ValidationError("replay needs --trace <file>");
  const TraceEntry entry{
      fs::path(run.trace_file).stem().string(),
      std::make_shared<NetworkTrace>(ReadTraceFile(run.trace_file))};
  const EstimatorFactory factory = MakeEstimatorFactory(run.estimator, run, s);
  auto estimator = factory(entry);
  const EpisodeRecord ep =
      RunEpisode(*estimator, entry, s.env, EpisodeSeed(run.seed, 0));
  const fs::path path = OutDir(run) / ("replay_" + run.estimator + "_" +
                                        entry.id + ".csv");
  WriteSeriesCsv(path, ep);
  const MetricsSummary m = Summarize(run.estimator, {&ep, 1});
  LogSummary(log, m);
  log << "series " << path.string() << '\n';
}

int GuardedRun(const std::function<void()>& fn, std::ostream& err) {
  try {
    fn();
    return kExitOk;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace rtclab::cli
