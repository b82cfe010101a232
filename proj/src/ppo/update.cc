#include "rtclab/ppo/update.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "rtclab/common/errors.h"

namespace rtclab {
namespace {

constexpr double kHalfLogTwoPi = 0.91893853320467274178;

nn::Tensor2 Column(const std::vector<double>& v) {
  return nn::Tensor2(v.size(), 1, v);
}

bool GradsFinite(nn::PolicyParams& params) {
  for (const nn::Parameter* p : params.All())
    if (!p->grad.AllFinite())
      return false;
  return true;
}

}  // namespace

void ValidatePpoConfig(const PpoConfig& cfg) {
  if (cfg.epochs < 1 || cfg.chunk_len < 1 || cfg.minibatch_chunks < 1 ||
      cfg.horizon < 1 || cfg.num_envs < 1 || cfg.workers < 1)
    throw ValidationError("PPO sizes must be >= 1");
  if (cfg.horizon % cfg.chunk_len != 0)
    throw ValidationError("horizon " + std::to_string(cfg.horizon) +
                          " is not a multiple of chunk_len " +
                          std::to_string(cfg.chunk_len));
  if (!(cfg.gamma > 0.0 && cfg.gamma <= 1.0))
    throw ValidationError("gamma must be in (0, 1]");
  if (!(cfg.gae_lambda >= 0.0 && cfg.gae_lambda <= 1.0))
    throw ValidationError("gae lambda must be in [0, 1]");
  if (!(cfg.clip_epsilon > 0.0 && cfg.clip_epsilon < 1.0))
    throw ValidationError("clip epsilon must be in (0, 1)");
  if (!(cfg.value_coef >= 0.0) || !(cfg.entropy_coef >= 0.0) ||
      !(cfg.max_grad_norm > 0.0))
    throw ValidationError("loss coefficients must be >= 0, grad norm > 0");
  if (!(cfg.adam.lr > 0.0))
    throw ValidationError("learning rate must be > 0");
}

std::vector<Chunk> MakeChunks(const RolloutBuffer& buffer,
                              std::size_t chunk_len) {
  if (chunk_len == 0)
    throw ValidationError("chunk length must be >= 1");
  std::vector<Chunk> chunks;
  for (std::size_t e = 0; e < buffer.envs.size(); ++e) {
    const std::size_t n = buffer.envs[e].size();
    if (n % chunk_len != 0)
      throw ValidationError("rollout length is not a multiple of chunk_len");
    for (std::size_t s = 0; s < n; s += chunk_len)
      chunks.push_back({e, s, chunk_len});
  }
  return chunks;
}

PpoLossVars BuildPpoLoss(nn::Graph& g, const nn::PolicyVars& vars,
                         const RolloutBuffer& buffer,
                         const std::vector<Chunk>& chunks,
                         const MinibatchTargets& targets,
                         const PpoConfig& cfg) {
  if (chunks.empty())
    throw ValidationError("minibatch has no chunks");
  const std::size_t c_count = chunks.size();
  const std::size_t len = chunks.front().length;
  for (const Chunk& c : chunks)
    if (c.length != len)
      throw ValidationError("chunks in a minibatch must share a length");
  const std::size_t rows = c_count * len;
  if (targets.pre_action.size() != rows ||
      targets.old_log_prob.size() != rows ||
      targets.advantage.size() != rows || targets.value_target.size() != rows)
    throw ValidationError("minibatch targets do not match chunk layout");

  const EnvRollout& first = buffer.envs.at(chunks.front().env);
  const std::size_t in = first.states.cols();
  const std::size_t hid = first.hidden.cols();

  nn::Tensor2 h0(c_count, hid);
  for (std::size_t c = 0; c < c_count; ++c) {
    const EnvRollout& e = buffer.envs[chunks[c].env];
    const double* src = e.hidden.data() + chunks[c].start * hid;
    std::copy(src, src + hid, &h0(c, 0));
  }
  nn::Var h = g.Input(std::move(h0));

  std::vector<nn::Var> pre;
  std::vector<nn::Var> val;
  pre.reserve(len);
  val.reserve(len);
  for (std::size_t t = 0; t < len; ++t) {
    nn::Tensor2 s(c_count, in);
    nn::Tensor2 mask(c_count, 1, 1.0);
    bool any_done = false;
    for (std::size_t c = 0; c < c_count; ++c) {
      const EnvRollout& e = buffer.envs[chunks[c].env];
      const std::size_t k = chunks[c].start + t;
      std::copy(e.states.data() + k * in, e.states.data() + (k + 1) * in,
                &s(c, 0));
      if (e.done[k]) {
        mask(c, 0) = 0.0;
        any_done = true;
      }
    }
    const nn::PolicyStepVars step =
        nn::PolicyStep(g, vars, g.Input(std::move(s)), h);
    pre.push_back(step.pre_mean);
    val.push_back(step.value);
    h = step.hidden;
    if (any_done && t + 1 < len)
      h = g.Mul(h, g.Input(std::move(mask)));
  }

  const nn::Var mu = g.ConcatRows(pre);
  const nn::Var value = g.ConcatRows(val);
  const nn::Var u = g.Input(Column(targets.pre_action));
  const nn::Var old_logp = g.Input(Column(targets.old_log_prob));
  const nn::Var adv = g.Input(Column(targets.advantage));
  const nn::Var ret = g.Input(Column(targets.value_target));

  const nn::Var inv_std = g.Exp(g.Scale(vars.log_std, -1.0));
  const nn::Var z = g.Mul(g.Sub(u, mu), inv_std);
  const nn::Var logp = g.AddScalar(
      g.Sub(g.Scale(g.Square(z), -0.5), vars.log_std), -kHalfLogTwoPi);

  PpoLossVars out;
  out.ratio = g.Exp(g.Sub(logp, old_logp));
  const nn::Var surr1 = g.Mul(out.ratio, adv);
  const nn::Var surr2 = g.Mul(
      g.Clamp(out.ratio, 1.0 - cfg.clip_epsilon, 1.0 + cfg.clip_epsilon),
      adv);
  out.policy_loss = g.Scale(g.Mean(g.Minimum(surr1, surr2)), -1.0);
  out.value_loss = g.Mean(g.Square(g.Sub(value, ret)));
  out.entropy = g.AddScalar(vars.log_std, 0.5 + kHalfLogTwoPi);
  out.total = g.Add(g.Add(out.policy_loss,
                          g.Scale(out.value_loss, cfg.value_coef)),
                    g.Scale(out.entropy, -cfg.entropy_coef));
  return out;
}

PpoDiagnostics PpoUpdate(nn::PolicyParams& params, nn::Adam& adam,
                         const RolloutBuffer& buffer, const GaeResult& gae,
                         const PpoConfig& cfg, std::mt19937_64& rng) {
  ValidatePpoConfig(cfg);
  const std::vector<Chunk> chunks =
      MakeChunks(buffer, static_cast<std::size_t>(cfg.chunk_len));
  std::vector<std::size_t> offset(buffer.envs.size() + 1, 0);
  for (std::size_t e = 0; e < buffer.envs.size(); ++e)
    offset[e + 1] = offset[e] + buffer.envs[e].size();
  if (gae.advantages.size() != offset.back() ||
      gae.returns.size() != offset.back())
    throw ValidationError("advantages do not match the rollout buffer");

  std::vector<double> adv = gae.advantages;
  if (cfg.normalize_advantages)
    NormalizeInPlace(adv);

  std::vector<nn::Tensor2> saved_values;
  for (const nn::Parameter* p : params.All())
    saved_values.push_back(p->value);
  const nn::Adam saved_adam = adam;
  auto restore = [&] {
    std::vector<nn::Parameter*> all = params.All();
    for (std::size_t i = 0; i < all.size(); ++i)
      all[i]->value = saved_values[i];
    adam = saved_adam;
    params.ZeroGrad();
  };

  PpoDiagnostics diag;
  double clipped = 0.0;
  double samples = 0.0;
  std::vector<std::size_t> order(chunks.size());
  const auto mb = static_cast<std::size_t>(cfg.minibatch_chunks);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    // Fisher-Yates on raw engine output keeps the order portable.
    for (std::size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[rng() % i]);

    for (std::size_t begin = 0; begin < order.size(); begin += mb) {
      const std::size_t end = std::min(order.size(), begin + mb);
      std::vector<Chunk> batch;
      for (std::size_t i = begin; i < end; ++i)
        batch.push_back(chunks[order[i]]);
      const std::size_t len = batch.front().length;

      MinibatchTargets targets;
      for (std::size_t t = 0; t < len; ++t) {
        for (const Chunk& c : batch) {
          const EnvRollout& e = buffer.envs[c.env];
          const std::size_t k = c.start + t;
          const std::size_t flat = offset[c.env] + k;
          targets.pre_action.push_back(e.pre_action[k]);
          targets.old_log_prob.push_back(e.log_prob[k]);
          targets.advantage.push_back(adv[flat]);
          targets.value_target.push_back(gae.returns[flat]);
        }
      }

      nn::Graph g;
      params.ZeroGrad();
      const nn::PolicyVars vars = nn::PolicyVars::Bind(g, params);
      const PpoLossVars loss =
          BuildPpoLoss(g, vars, buffer, batch, targets, cfg);
      const double total = g.value(loss.total)[0];
      if (!std::isfinite(total)) {
        restore();
        diag.aborted = true;
        return diag;
      }
      g.Backward(loss.total);
      if (!GradsFinite(params)) {
        restore();
        diag.aborted = true;
        return diag;
      }
      diag.grad_norm += nn::ClipGradNorm(params.All(), cfg.max_grad_norm);
      adam.Step();

      diag.policy_loss += g.value(loss.policy_loss)[0];
      diag.value_loss += g.value(loss.value_loss)[0];
      diag.entropy += g.value(loss.entropy)[0];
      const nn::Tensor2& ratio = g.value(loss.ratio);
      double kl = 0.0;
      for (std::size_t i = 0; i < ratio.size(); ++i) {
        if (std::abs(ratio[i] - 1.0) > cfg.clip_epsilon)
          clipped += 1.0;
        kl -= std::log(ratio[i]);
      }
      samples += static_cast<double>(ratio.size());
      diag.approx_kl += kl / static_cast<double>(ratio.size());
      ++diag.minibatches;
    }
  }
  const double n = std::max(1, diag.minibatches);
  diag.policy_loss /= n;
  diag.value_loss /= n;
  diag.entropy /= n;
  diag.approx_kl /= n;
  diag.grad_norm /= n;
  diag.clip_fraction = samples > 0.0 ? clipped / samples : 0.0;
  return diag;
}

}  // namespace rtclab
