#include "rtclab/ppo/gae.h"

#include <cmath>

#include "rtclab/common/errors.h"

namespace rtclab {

GaeResult ComputeGae(std::span<const double> rewards,
                     std::span<const double> values,
                     std::span<const uint8_t> dones, double bootstrap,
                     double gamma, double lambda) {
  const std::size_t n = rewards.size();
  if (values.size() != n || dones.size() != n)
    throw ValidationError("GAE inputs differ in length");
  GaeResult out;
  out.advantages.assign(n, 0.0);
  out.returns.assign(n, 0.0);
  double next_value = bootstrap;
  double next_adv = 0.0;
  for (std::size_t k = n; k-- > 0;) {
    const double live = dones[k] ? 0.0 : 1.0;
    const double delta = rewards[k] + gamma * next_value * live - values[k];
    next_adv = delta + gamma * lambda * live * next_adv;
    out.advantages[k] = next_adv;
    out.returns[k] = next_adv + values[k];
    next_value = values[k];
  }
  return out;
}

void NormalizeInPlace(std::vector<double>& v) {
  if (v.empty())
    return;
  double mean = 0.0;
  for (double x : v)
    mean += x;
  mean /= static_cast<double>(v.size());
  double var = 0.0;
  for (double x : v)
    var += (x - mean) * (x - mean);
  var /= static_cast<double>(v.size());
  const double sd = std::sqrt(var);
  for (double& x : v)
    x = sd > 1e-12 ? (x - mean) / sd : 0.0;
}

GaeResult ComputeBufferGae(const RolloutBuffer& buffer, double gamma,
                           double lambda) {
  GaeResult all;
  for (const EnvRollout& e : buffer.envs) {
    GaeResult g = ComputeGae(e.reward, e.value, e.done, e.bootstrap_value,
                             gamma, lambda);
    all.advantages.insert(all.advantages.end(), g.advantages.begin(),
                          g.advantages.end());
    all.returns.insert(all.returns.end(), g.returns.begin(), g.returns.end());
  }
  return all;
}

double ReturnScaler::scale() const {
  if (count_ < 2.0)
    return 1.0;
  return std::sqrt(m2_ / count_ + 1e-8);
}

void ReturnScaler::Apply(RolloutBuffer& buffer) {
  running_.resize(buffer.envs.size(), 0.0);
  for (std::size_t e = 0; e < buffer.envs.size(); ++e) {
    const EnvRollout& r = buffer.envs[e];
    for (std::size_t t = 0; t < r.size(); ++t) {
      running_[e] = gamma_ * running_[e] + r.reward[t];
      // Welford
      count_ += 1.0;
      const double d = running_[e] - mean_;
      mean_ += d / count_;
      m2_ += d * (running_[e] - mean_);
      if (r.done[t])
        running_[e] = 0.0;
    }
  }
  const double s = scale();
  for (EnvRollout& r : buffer.envs)
    for (double& x : r.reward)
      x /= s;
}

}  // namespace rtclab
