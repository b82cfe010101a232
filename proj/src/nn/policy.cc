#include "rtclab/nn/policy.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "rtclab/common/errors.h"

namespace rtclab::nn {
namespace {

constexpr double kHalfLogTwoPi = 0.91893853320467274178;  // 0.5 ln(2 pi)

void CheckFinite(const Tensor2& t, const char* layer) {
  if (!t.AllFinite())
    throw NumericError(std::string("non-finite output in layer ") + layer);
}

}  // namespace

PolicyParams PolicyParams::Init(const PolicyConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  PolicyParams p;
  p.leaky_slope = cfg.leaky_slope;
  p.trunk_w = Parameter("trunk.w",
                        FanInUniform(cfg.input_size, cfg.trunk_size, rng));
  p.trunk_b = Parameter("trunk.b", Tensor2(1, cfg.trunk_size));
  p.gru = GruCellParams::Init("gru", cfg.trunk_size, cfg.hidden_size, rng);
  p.actor_w = Parameter(
      "actor.w", FanInUniform(cfg.hidden_size, 1, rng, cfg.actor_init_gain));
  p.actor_b = Parameter("actor.b", Tensor2(1, 1));
  p.log_std = Parameter("actor.log_std", Tensor2(1, 1, cfg.init_log_std));
  p.critic_w = Parameter("critic.w", FanInUniform(cfg.hidden_size, 1, rng));
  p.critic_b = Parameter("critic.b", Tensor2(1, 1));
  return p;
}

std::vector<Parameter*> PolicyParams::All() {
  std::vector<Parameter*> out{&trunk_w, &trunk_b};
  for (Parameter* g : gru.All())
    out.push_back(g);
  for (Parameter* q : {&actor_w, &actor_b, &log_std, &critic_w, &critic_b})
    out.push_back(q);
  return out;
}

std::vector<const Parameter*> PolicyParams::All() const {
  std::vector<const Parameter*> out{&trunk_w, &trunk_b};
  for (const Parameter* g : gru.All())
    out.push_back(g);
  for (const Parameter* q :
       {&actor_w, &actor_b, &log_std, &critic_w, &critic_b})
    out.push_back(q);
  return out;
}

void PolicyParams::ZeroGrad() {
  for (Parameter* p : All())
    p->ZeroGrad();
}

void PolicyParams::Validate() const {
  const std::size_t trunk = trunk_w.value.cols();
  RequireShape(trunk_b.value, 1, trunk, trunk_b.name);
  if (gru.input_size() != trunk)
    throw ValidationError(gru.w_z.name + ": input size " +
                          std::to_string(gru.input_size()) +
                          " does not match trunk width " +
                          std::to_string(trunk));
  gru.Validate();
  const std::size_t hid = gru.hidden_size();
  RequireShape(actor_w.value, hid, 1, actor_w.name);
  RequireShape(actor_b.value, 1, 1, actor_b.name);
  RequireShape(log_std.value, 1, 1, log_std.name);
  RequireShape(critic_w.value, hid, 1, critic_w.name);
  RequireShape(critic_b.value, 1, 1, critic_b.name);
  for (const Parameter* p : All())
    if (!p->value.AllFinite())
      throw ValidationError(p->name + ": non-finite value");
}

Tensor2 InitialHidden(const PolicyParams& p, std::size_t batch) {
  return Tensor2(batch, p.hidden_size());
}

PolicyBatchOutput PolicyForwardBatch(const PolicyParams& p,
                                     const Tensor2& states, const Tensor2& h) {
  if (states.cols() != p.input_size())
    throw ValidationError("policy input has " + std::to_string(states.cols()) +
                          " features, expected " +
                          std::to_string(p.input_size()));
  Tensor2 feats = MatMul(states, p.trunk_w.value);
  AddRowInPlace(feats, p.trunk_b.value);
  feats = LeakyRelu(feats, p.leaky_slope);
  CheckFinite(feats, "trunk");

  PolicyBatchOutput out;
  out.hidden = GruCellForward(p.gru, feats, h);
  CheckFinite(out.hidden, "gru");

  Tensor2 actor = MatMul(out.hidden, p.actor_w.value);
  Tensor2 critic = MatMul(out.hidden, p.critic_w.value);
  CheckFinite(actor, "actor");
  CheckFinite(critic, "critic");
  const double log_std = p.log_std.value[0];
  out.rows.resize(states.rows());
  for (std::size_t i = 0; i < states.rows(); ++i) {
    PolicyOutput& o = out.rows[i];
    o.pre_mean = actor[i] + p.actor_b.value[0];
    o.mean = std::clamp(Sigmoid(o.pre_mean), kMeanEpsilon, 1.0 - kMeanEpsilon);
    o.log_std = log_std;
    o.value = critic[i] + p.critic_b.value[0];
  }
  return out;
}

PolicyOutput PolicyForward(const PolicyParams& p, std::span<const double> state,
                           Tensor2& h) {
  Tensor2 s(1, state.size(), std::vector<double>(state.begin(), state.end()));
  PolicyBatchOutput out = PolicyForwardBatch(p, s, h);
  h = std::move(out.hidden);
  return out.rows[0];
}

PolicyVars PolicyVars::Bind(Graph& g, PolicyParams& p) {
  PolicyVars v;
  v.trunk_w = g.Param(p.trunk_w);
  v.trunk_b = g.Param(p.trunk_b);
  v.gru = GruVars::Bind(g, p.gru);
  v.actor_w = g.Param(p.actor_w);
  v.actor_b = g.Param(p.actor_b);
  v.log_std = g.Param(p.log_std);
  v.critic_w = g.Param(p.critic_w);
  v.critic_b = g.Param(p.critic_b);
  v.leaky_slope = p.leaky_slope;
  return v;
}

PolicyStepVars PolicyStep(Graph& g, const PolicyVars& p, Var states, Var h) {
  const Var feats = g.LeakyRelu(
      g.Add(g.MatMul(states, p.trunk_w), p.trunk_b), p.leaky_slope);
  PolicyStepVars out;
  out.hidden = GruCell(g, p.gru, feats, h);
  out.pre_mean = g.Add(g.MatMul(out.hidden, p.actor_w), p.actor_b);
  out.value = g.Add(g.MatMul(out.hidden, p.critic_w), p.critic_b);
  return out;
}

double GaussianLogProb(double u, double mu, double log_std) {
  const double z = (u - mu) * std::exp(-log_std);
  return -0.5 * z * z - log_std - kHalfLogTwoPi;
}

double GaussianEntropy(double log_std) { return 0.5 + kHalfLogTwoPi + log_std; }

}  // namespace rtclab::nn
