#include "rtclab/ppo/rollout.h"

#include <algorithm>
#include <exception>
#include <string>
#include <thread>

#include "rtclab/common/errors.h"
#include "rtclab/common/random.h"

namespace rtclab {
namespace {

uint64_t SlotSeed(uint64_t seed, std::size_t index) {
  uint64_t z = seed ^ (0xd1b54a32d192ed03ULL * (index + 1));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void StartEpisode(EnvSlot& slot, const RolloutContext& ctx) {
  const std::size_t pick = slot.rng() % ctx.corpus.size();
  EnvConfig cfg = ctx.env_template;
  cfg.trace = ctx.corpus[pick].trace;
  cfg.seed = slot.rng();
  slot.env.Reset(std::move(cfg));
  slot.hidden.Fill(0.0);
  slot.episode_reward = 0.0;
  slot.episode_steps = 0;
}

struct GroupOutput {
  std::vector<double> episode_mean_rewards;
};

[[noreturn]] void RethrowForEnv(std::size_t index) {
  const std::string where = "environment " + std::to_string(index) + ": ";
  try {
    throw;
  } catch (const ValidationError& e) {
    throw ValidationError(where + e.what());
  } catch (const NumericError& e) {
    throw NumericError(where + e.what());
  } catch (const std::exception& e) {
    throw std::runtime_error(where + e.what());
  }
}

void RunGroup(const nn::PolicyParams& policy, std::span<EnvSlot> slots,
              std::span<EnvRollout> out, std::size_t base,
              const RolloutContext& ctx, int horizon, GroupOutput& group) {
  const std::size_t b = slots.size();
  const std::size_t in = policy.input_size();
  const std::size_t hid = policy.hidden_size();
  const auto t_max = static_cast<std::size_t>(horizon);
  for (EnvRollout& r : out) {
    r.states = nn::Tensor2(t_max, in);
    r.hidden = nn::Tensor2(t_max, hid);
    r.pre_action.assign(t_max, 0.0);
    r.log_prob.assign(t_max, 0.0);
    r.value.assign(t_max, 0.0);
    r.reward.assign(t_max, 0.0);
    r.done.assign(t_max, 0);
  }

  nn::Tensor2 states(b, in);
  nn::Tensor2 hidden(b, hid);
  auto gather = [&] {
    for (std::size_t i = 0; i < b; ++i) {
      const StateVector& s = slots[i].env.last().state;
      std::copy(s.values.begin(), s.values.end(), &states(i, 0));
      std::copy(slots[i].hidden.data(), slots[i].hidden.data() + hid,
                &hidden(i, 0));
    }
  };

  for (std::size_t t = 0; t < t_max; ++t) {
    gather();
    const nn::PolicyBatchOutput fwd =
        nn::PolicyForwardBatch(policy, states, hidden);
    for (std::size_t i = 0; i < b; ++i) {
      EnvSlot& slot = slots[i];
      EnvRollout& r = out[i];
      const nn::PolicyOutput& o = fwd.rows[i];
      const double u =
          o.pre_mean + std::exp(o.log_std) * StandardNormal(slot.rng);
      std::copy(&states(i, 0), &states(i, 0) + in, &r.states(t, 0));
      std::copy(&hidden(i, 0), &hidden(i, 0) + hid, &r.hidden(t, 0));
      r.pre_action[t] = u;
      r.log_prob[t] = nn::GaussianLogProb(u, o.pre_mean, o.log_std);
      r.value[t] = o.value;

      StepResult step;
      try {
        step = slot.env.Step(
            Action::FromRaw(SquashAction(u), ctx.env_template.action_map));
        if (step.done) {
          group.episode_mean_rewards.push_back(
              (slot.episode_reward + step.reward) /
              static_cast<double>(slot.episode_steps + 1));
          StartEpisode(slot, ctx);
        }
      } catch (...) {
        RethrowForEnv(base + i);
      }
      r.reward[t] = step.reward;
      r.done[t] = step.done ? 1 : 0;
      if (!step.done) {
        slot.episode_reward += step.reward;
        ++slot.episode_steps;
        std::copy(fwd.hidden.data() + i * hid, fwd.hidden.data() + (i + 1) * hid,
                  slot.hidden.data());
      }
    }
  }

  gather();
  const nn::PolicyBatchOutput boot =
      nn::PolicyForwardBatch(policy, states, hidden);
  for (std::size_t i = 0; i < b; ++i)
    out[i].bootstrap_value = boot.rows[i].value;
}

}  // namespace

double SquashAction(double u) {
  return std::clamp(nn::Sigmoid(u), Action::kRawEpsilon,
                    1.0 - Action::kRawEpsilon);
}

std::size_t RolloutBuffer::transitions() const {
  std::size_t n = 0;
  for (const EnvRollout& e : envs)
    n += e.size();
  return n;
}

double RolloutBuffer::MeanReward() const {
  double sum = 0.0;
  std::size_t n = 0;
  for (const EnvRollout& e : envs) {
    for (double r : e.reward)
      sum += r;
    n += e.size();
  }
  return n > 0 ? sum / static_cast<double>(n) : 0.0;
}

std::vector<EnvSlot> MakeEnvSlots(const RolloutContext& ctx,
                                  const nn::PolicyParams& policy, int count,
                                  uint64_t seed) {
  if (ctx.corpus.empty())
    throw ValidationError("training corpus is empty");
  if (count < 1)
    throw ValidationError("need at least one environment");
  std::vector<EnvSlot> slots(static_cast<std::size_t>(count));
  for (std::size_t i = 0; i < slots.size(); ++i) {
    slots[i].rng.seed(SlotSeed(seed, i));
    slots[i].hidden = nn::InitialHidden(policy);
    StartEpisode(slots[i], ctx);
  }
  return slots;
}

RolloutBuffer CollectRollouts(const nn::PolicyParams& policy,
                              std::span<EnvSlot> slots,
                              const RolloutContext& ctx, int horizon,
                              int workers) {
  if (horizon < 1)
    throw ValidationError("rollout horizon must be >= 1");
  if (slots.empty())
    throw ValidationError("no environments to collect from");
  RolloutBuffer buffer;
  buffer.envs.resize(slots.size());

  const std::size_t groups =
      std::clamp<std::size_t>(static_cast<std::size_t>(std::max(1, workers)),
                              1, slots.size());
  std::vector<GroupOutput> outputs(groups);
  std::vector<std::exception_ptr> errors(groups);
  std::vector<std::size_t> first(groups + 1);
  for (std::size_t g = 0; g <= groups; ++g)
    first[g] = g * slots.size() / groups;

  auto run = [&](std::size_t g) {
    try {
      RunGroup(policy, slots.subspan(first[g], first[g + 1] - first[g]),
               std::span<EnvRollout>(buffer.envs)
                   .subspan(first[g], first[g + 1] - first[g]),
               first[g], ctx, horizon, outputs[g]);
    } catch (...) {
      errors[g] = std::current_exception();
    }
  };
  if (groups == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t g = 0; g < groups; ++g)
      pool.emplace_back(run, g);
  }

  for (const std::exception_ptr& e : errors)
    if (e)
      std::rethrow_exception(e);
  for (GroupOutput& o : outputs)
    buffer.episode_mean_rewards.insert(buffer.episode_mean_rewards.end(),
                                       o.episode_mean_rewards.begin(),
                                       o.episode_mean_rewards.end());
  return buffer;
}

}  // namespace rtclab
