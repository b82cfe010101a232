#ifndef RTCLAB_ENV_RTC_ENV_H_
#define RTCLAB_ENV_RTC_ENV_H_

#include <cstdint>
#include <memory>
#include <optional>

#include "rtclab/env/state_reward.h"
#include "rtclab/rtc/call.h"
#include "rtclab/trace/trace.h"

namespace rtclab {

struct EnvConfig {
  double step_len_ms = 50.0;
  std::shared_ptr<const NetworkTrace> trace;
  uint64_t seed = 1;
  StateScaling scaling;
  ActionMap action_map = ActionMap::kLinear;
  double warmup_estimate_kbps = 300.0;
  // Sender and simulator settings; the simulator seed is taken from `seed`.
  CallConfig call;
};

// Ground-truth side channel for metrics. Not part of what a policy sees.
struct StepInfo {
  ObservationWindow window;
  double capacity_kbps = 0.0;  // mean over the window
  double estimate_kbps = 0.0;  // estimate fed back at the window start
  double time_ms = 0.0;        // window start
};

struct StepResult {
  StateVector state;
  double reward = 0.0;
  bool done = false;
  StepInfo info;
};

// 50 ms-step episodic environment over one simulated call. Episodes last
// floor(duration / step_len) windows, the first being the warm-up window
// run by Reset().
class RtcEnv {
 public:
  RtcEnv() = default;
  explicit RtcEnv(EnvConfig cfg) { Reset(std::move(cfg)); }

  // Builds a fresh call and runs the warm-up window at the warm-up estimate.
  StateVector Reset(EnvConfig cfg);
  // Same configuration, fresh call.
  StateVector Reset();

  // Throws StateError if the episode is done or Reset() was never called.
  StepResult Step(const Action& action);
  // Convenience for estimators that speak kb/s.
  StepResult StepBandwidth(double estimate_kbps);

  bool done() const { return done_; }
  int64_t steps_taken() const { return steps_; }
  int64_t episode_steps() const { return episode_steps_; }
  const StepResult& last() const { return last_; }
  const EnvConfig& config() const { return cfg_; }
  const Call& call() const { return *call_; }

 private:
  StepResult RunWindow(double estimate_kbps);

  EnvConfig cfg_;
  std::optional<Call> call_;
  StepResult last_;
  int64_t steps_ = 0;
  int64_t episode_steps_ = 0;
  bool done_ = true;
};

}  // namespace rtclab

#endif  // RTCLAB_ENV_RTC_ENV_H_
