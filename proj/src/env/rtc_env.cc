#include "rtclab/env/rtc_env.h"

#include <cmath>

#include "rtclab/common/errors.h"

namespace rtclab {

StateVector RtcEnv::Reset(EnvConfig cfg) {
  if (!cfg.trace)
    throw ValidationError("environment requires a trace");
  if (!(cfg.step_len_ms > 0.0))
    throw ValidationError("step length must be > 0");
  const auto windows = static_cast<int64_t>(
      std::floor(static_cast<double>(cfg.trace->duration_ms()) /
                 cfg.step_len_ms));
  if (windows < 1)
    throw ValidationError("trace shorter than one environment step");
  cfg_ = std::move(cfg);
  return Reset();
}

StateVector RtcEnv::Reset() {
  if (!cfg_.trace)
    throw StateError("Reset() before configuration");
  CallConfig call_cfg = cfg_.call;
  call_cfg.sim.seed = cfg_.seed;
  call_.emplace(cfg_.trace, call_cfg);
  episode_steps_ = static_cast<int64_t>(std::floor(
      static_cast<double>(cfg_.trace->duration_ms()) / cfg_.step_len_ms));
  steps_ = 0;
  done_ = false;
  RunWindow(cfg_.warmup_estimate_kbps);
  return last_.state;
}

StepResult RtcEnv::RunWindow(double estimate_kbps) {
  const double start_ms = UsToMs(call_->now());
  StepResult r;
  r.info.window = call_->Step(estimate_kbps, cfg_.step_len_ms);
  r.info.capacity_kbps = cfg_.trace->MeanCapacityKbps(
      start_ms, start_ms + cfg_.step_len_ms);
  r.info.estimate_kbps = estimate_kbps;
  r.info.time_ms = start_ms;
  r.state = ScaleState(r.info.window, cfg_.scaling);
  r.reward = Reward(r.info.window);
  ++steps_;
  done_ = steps_ >= episode_steps_;
  r.done = done_;
  last_ = r;
  return r;
}

StepResult RtcEnv::Step(const Action& action) {
  if (!call_)
    throw StateError("Step() before Reset()");
  if (done_)
    throw StateError("Step() after the episode is done");
  return RunWindow(action.mapped_bandwidth_kbps);
}

StepResult RtcEnv::StepBandwidth(double estimate_kbps) {
  return Step(Action::FromBandwidth(estimate_kbps, cfg_.action_map));
}

}  // namespace rtclab
