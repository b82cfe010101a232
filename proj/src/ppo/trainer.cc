#include "rtclab/ppo/trainer.h"

#include <fstream>
#include <memory>
#include <ostream>

#include "rtclab/common/errors.h"
#include "rtclab/eval/report.h"
#include "rtclab/nn/adam.h"
#include "rtclab/nn/checkpoint.h"
#include "rtclab/ppo/gae.h"
#include "rtclab/ppo/policy_estimator.h"
#include "rtclab/ppo/rollout.h"

namespace rtclab {

void WriteTrainLogRow(std::ostream& out, const TrainLogRow& row) {
  out << row.iteration << ',' << row.steps << ','
      << FormatNumber(row.mean_reward) << ','
      << FormatNumber(row.diag.policy_loss) << ','
      << FormatNumber(row.diag.value_loss) << ','
      << FormatNumber(row.diag.entropy) << ','
      << FormatNumber(row.diag.clip_fraction) << '\n';
}

Evaluation EvaluatePolicy(const nn::PolicyParams& params,
                          const std::vector<TraceEntry>& traces,
                          const EnvConfig& env, uint64_t seed, int workers) {
  auto shared = std::make_shared<const nn::PolicyParams>(params);
  EvalConfig cfg;
  cfg.env = env;
  cfg.seed = seed;
  cfg.workers = workers;
  return Evaluate(
      "policy",
      [&](const TraceEntry&) {
        return std::make_unique<PolicyEstimator>(shared, env.scaling,
                                                 env.action_map);
      },
      traces, cfg);
}

TrainResult Train(const TrainConfig& cfg, std::span<const TraceEntry> corpus,
                  const TrainProgress& progress) {
  ValidatePpoConfig(cfg.ppo);
  if (corpus.empty())
    throw ValidationError("training corpus is empty");
  if (cfg.iterations < 0)
    throw ValidationError("iterations must be >= 0");
  if (cfg.max_env_steps < 0)
    throw ValidationError("max_env_steps must be >= 0");
  if (!cfg.eval_traces.empty() && cfg.eval_interval < 1)
    throw ValidationError("eval_interval must be >= 1");

  nn::PolicyConfig pcfg = cfg.ppo.policy;
  pcfg.seed = cfg.seed;
  TrainResult result;
  result.final_params = nn::PolicyParams::Init(pcfg);
  result.best_params = result.final_params;

  std::ofstream log;
  if (!cfg.log_path.empty()) {
    log.open(cfg.log_path);
    if (!log)
      throw std::runtime_error("cannot write training log " + cfg.log_path);
    log << kTrainLogHeader << '\n';
    log.flush();
  }
  auto save_best = [&] {
    if (!cfg.checkpoint_path.empty())
      nn::SaveCheckpoint(cfg.checkpoint_path, result.best_params);
  };
  auto evaluate = [&](const nn::PolicyParams& p) {
    return EvaluatePolicy(p, cfg.eval_traces, cfg.env, cfg.eval_seed,
                          cfg.ppo.workers)
        .summary.reward_mean;
  };

  if (!cfg.eval_traces.empty())
    result.best_eval_reward = evaluate(result.final_params);
  save_best();
  if (cfg.iterations == 0)
    return result;

  nn::PolicyParams& params = result.final_params;
  nn::Adam adam(cfg.ppo.adam, params.All());
  std::mt19937_64 rng(cfg.seed ^ 0x5851f42d4c957f2dULL);
  const RolloutContext ctx{corpus, cfg.env};
  std::vector<EnvSlot> slots =
      MakeEnvSlots(ctx, params, cfg.ppo.num_envs, cfg.seed);
  ReturnScaler scaler(cfg.ppo.gamma);
  const int64_t per_iteration =
      static_cast<int64_t>(cfg.ppo.horizon) * cfg.ppo.num_envs;

  for (int it = 0; it < cfg.iterations; ++it) {
    if (cfg.max_env_steps > 0 &&
        result.env_steps + per_iteration > cfg.max_env_steps)
      break;
    RolloutBuffer buffer = CollectRollouts(
        params, slots, ctx, cfg.ppo.horizon, cfg.ppo.workers);
    result.env_steps += static_cast<int64_t>(buffer.transitions());
    TrainLogRow row;
    row.iteration = it;
    row.steps = result.env_steps;
    row.mean_reward = buffer.MeanReward();
    if (cfg.ppo.scale_rewards)
      scaler.Apply(buffer);
    const GaeResult gae =
        ComputeBufferGae(buffer, cfg.ppo.gamma, cfg.ppo.gae_lambda);
    row.diag = PpoUpdate(params, adam, buffer, gae, cfg.ppo, rng);
    result.log.push_back(row);
    if (log.is_open()) {
      WriteTrainLogRow(log, row);
      log.flush();
    }
    if (progress)
      progress(row);
    if (row.diag.aborted)
      throw NumericError("non-finite loss at iteration " +
                         std::to_string(it) + "; update aborted");

    const bool last =
        it + 1 == cfg.iterations ||
        (cfg.max_env_steps > 0 &&
         result.env_steps + per_iteration > cfg.max_env_steps);
    if (!cfg.eval_traces.empty() && ((it + 1) % cfg.eval_interval == 0 || last)) {
      const double r = evaluate(params);
      if (r > *result.best_eval_reward) {
        result.best_eval_reward = r;
        result.best_params = params;
        save_best();
      }
    }
  }
  if (cfg.eval_traces.empty()) {
    result.best_params = params;
    save_best();
  }
  return result;
}

}  // namespace rtclab
