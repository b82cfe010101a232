#ifndef RTCLAB_PPO_GAE_H_
#define RTCLAB_PPO_GAE_H_

#include <cstdint>
#include <span>
#include <vector>

#include "rtclab/ppo/rollout.h"

namespace rtclab {

struct GaeResult {
  std::vector<double> advantages;
  std::vector<double> returns;  // advantages + values, before normalization
};

//   delta_t = r_t + gamma V_{t+1} (1 - done_t) - V_t
//   A_t     = delta_t + gamma lambda (1 - done_t) A_{t+1}
// with V_T = bootstrap.
GaeResult ComputeGae(std::span<const double> rewards,
                     std::span<const double> values,
                     std::span<const uint8_t> dones, double bootstrap,
                     double gamma, double lambda);

// Zero mean, unit standard deviation (population). Constant inputs become
// all zeros.
void NormalizeInPlace(std::vector<double>& v);

// Per-environment GAE over a whole buffer, concatenated in env order.
GaeResult ComputeBufferGae(const RolloutBuffer& buffer, double gamma,
                           double lambda);

// Divides rewards by a running standard deviation of the per-environment
// discounted return, so value targets stay O(1) whatever the reward scale.
class ReturnScaler {
 public:
  explicit ReturnScaler(double gamma) : gamma_(gamma) {}

  // Updates the statistics with every step of the buffer (in time order,
  // accumulators reset at done) and rescales its rewards in place.
  void Apply(RolloutBuffer& buffer);

  double scale() const;  // current divisor

 private:
  double gamma_;
  std::vector<double> running_;  // discounted return per environment
  double count_ = 0.0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

}  // namespace rtclab

#endif  // RTCLAB_PPO_GAE_H_
