#include <cmath>
#include <memory>
#include <random>

#include "gtest/gtest.h"
#include "rtclab/common/errors.h"
#include "rtclab/env/rtc_env.h"
#include "rtclab/env/state_reward.h"

namespace rtclab {
namespace {

std::shared_ptr<const NetworkTrace> Constant(double kbps, double owd_ms,
                                             double loss = 0.0,
                                             int64_t duration_ms = 30000) {
  return std::make_shared<NetworkTrace>(
      std::vector<TraceSegment>{{0, {kbps, owd_ms, loss}}}, duration_ms);
}

ObservationWindow Window(double r_kbps, double interval_ms, double loss,
                         double rtt_ms) {
  ObservationWindow w;
  w.receive_rate_kbps = r_kbps;
  w.avg_packet_interval_ms = interval_ms;
  w.loss_rate = loss;
  w.avg_rtt_ms = rtt_ms;
  w.valid = true;
  return w;
}

// Reference evaluation in extended precision.
double RewardOracle(double r_mbps, double d_s, double l) {
  const long double v = 0.6L * std::log(4.0L * r_mbps + 1.0L) - d_s - 10.0L * l;
  return static_cast<double>(v);
}

EnvConfig Config(std::shared_ptr<const NetworkTrace> trace, uint64_t seed = 1) {
  EnvConfig cfg;
  cfg.trace = std::move(trace);
  cfg.seed = seed;
  return cfg;
}

TEST(Reward, Examples) {
  EXPECT_EQ(Reward(Window(0, 0, 0, 0)), 0.0);
  EXPECT_NEAR(Reward(Window(1000, 0, 0, 100)), RewardOracle(1, 0.1, 0), 1e-9);
  EXPECT_NEAR(Reward(Window(1000, 0, 0, 100)), 0.865662747460460, 1e-9);
  EXPECT_NEAR(Reward(Window(500, 0, 0.1, 250)), RewardOracle(0.5, 0.25, 0.1),
              1e-9);
  EXPECT_NEAR(Reward(Window(500, 0, 0.1, 250)), -0.590832626799134, 1e-9);
  EXPECT_NEAR(Reward(Window(8000, 0, 0, 0)), RewardOracle(8, 0, 0), 1e-9);
  EXPECT_NEAR(Reward(Window(8000, 0, 0, 0)), 2.097904536879888, 1e-9);
}

TEST(Reward, Monotonicity) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<> r(0, 8000), d(0, 1000), l(0, 0.99);
  for (int i = 0; i < 1000; ++i) {
    const ObservationWindow w = Window(r(rng), 10, l(rng), d(rng));
    const double base = Reward(w);
    ObservationWindow up = w;
    up.receive_rate_kbps += 1.0;
    EXPECT_GT(Reward(up), base);
    ObservationWindow slow = w;
    slow.avg_rtt_ms += 1.0;
    EXPECT_LT(Reward(slow), base);
    ObservationWindow lossy = w;
    lossy.loss_rate += 0.001;
    EXPECT_LT(Reward(lossy), base);
  }
}

TEST(ScaleState, Examples) {
  const StateVector s = ScaleState(Window(1000, 10, 0, 100));
  EXPECT_EQ(s.values, (std::array<double, 4>{1.0, 0.1, 0.0, 0.1}));
  ObservationWindow zero;
  zero.avg_rtt_ms = 230;
  EXPECT_EQ(ScaleState(zero).values, (std::array<double, 4>{0, 0, 0, 0.23}));
  EXPECT_DOUBLE_EQ(ScaleState(Window(8000, 1, 0, 0)).receive_rate(), 8.0);
}

TEST(ActionMap, LinearExamplesAndRange) {
  EXPECT_DOUBLE_EQ(Action::FromRaw(0.5).mapped_bandwidth_kbps, 4000.0);
  EXPECT_THROW(Action::FromRaw(0.0), ValidationError);
  EXPECT_THROW(Action::FromRaw(1.0), ValidationError);
  EXPECT_THROW(Action::FromRaw(std::nan("")), ValidationError);
}

TEST(ActionMap, Bijective) {
  for (ActionMap map : {ActionMap::kLinear, ActionMap::kLog}) {
    for (double raw = 0.001; raw < 1.0; raw += 0.0371) {
      const Action a = Action::FromRaw(raw, map);
      EXPECT_GT(a.mapped_bandwidth_kbps, 0.0);
      EXPECT_LT(a.mapped_bandwidth_kbps, 8000.0);
      EXPECT_NEAR(Action::FromBandwidth(a.mapped_bandwidth_kbps, map).raw, raw,
                  1e-12);
    }
  }
  EXPECT_DOUBLE_EQ(Action::FromBandwidth(2000).raw, 0.25);
}

TEST(RtcEnv, ResetDeterministic) {
  RtcEnv a, b;
  EXPECT_EQ(a.Reset(Config(Constant(2000, 20, 0.01))),
            b.Reset(Config(Constant(2000, 20, 0.01))));
  EXPECT_EQ(a.Reset(), b.Reset());
}

TEST(RtcEnv, WarmupDeliversWarmupRate) {
  RtcEnv env;
  env.Reset(Config(Constant(2000, 20)));
  // The warm-up window starts with the sender's initial frame burst; run a
  // few more windows at the warm-up estimate and look at the steady rate.
  double sum = 0.0;
  for (int i = 0; i < 20; ++i)
    sum += env.StepBandwidth(300).state.receive_rate();
  EXPECT_NEAR(sum / 20.0, 0.3, 0.03);
  EXPECT_GT(env.last().state.receive_rate(), 0.0);
}

TEST(RtcEnv, InvalidTraceRejected) {
  RtcEnv env;
  EXPECT_THROW(env.Reset(EnvConfig{}), ValidationError);
  EXPECT_THROW(NetworkTrace({}, 1000), ValidationError);
}

TEST(RtcEnv, HalfRawReachesSenderAfterLatency) {
  RtcEnv env;
  env.Reset(Config(Constant(8000, 30)));
  env.Step(Action::FromRaw(0.5));
  EXPECT_DOUBLE_EQ(env.call().sender().target_bitrate_kbps(), 4000.0);
}

TEST(RtcEnv, OverloadBuildsDelayThenLoss) {
  RtcEnv env;
  env.Reset(Config(Constant(1000, 20)));
  double first_rtt = -1;
  bool lost = false;
  double last_rtt = 0;
  for (int i = 0; i < 40 && !lost; ++i) {
    const StepResult r = env.StepBandwidth(4000);
    if (r.info.window.rtt_known && first_rtt < 0)
      first_rtt = r.info.window.avg_rtt_ms;
    last_rtt = r.info.window.avg_rtt_ms;
    lost = r.info.window.loss_rate > 0.0;
  }
  EXPECT_TRUE(lost);
  EXPECT_GT(last_rtt, first_rtt + 100.0);
}

TEST(RtcEnv, StepAfterDoneThrows) {
  RtcEnv env;
  env.Reset(Config(Constant(1000, 20, 0.0, 500)));
  EXPECT_EQ(env.episode_steps(), 10);
  int steps = 1;
  while (!env.done()) {
    env.StepBandwidth(500);
    ++steps;
  }
  EXPECT_EQ(steps, 10);
  EXPECT_TRUE(env.last().done);
  EXPECT_THROW(env.StepBandwidth(500), StateError);
  EXPECT_THROW(RtcEnv().StepBandwidth(500), StateError);
}

TEST(RtcEnv, WindowsAreExactly50Ms) {
  RtcEnv env;
  env.Reset(Config(Constant(3000, 15)));
  SimTime last = env.call().now();
  double last_ms = env.last().info.time_ms;
  for (int i = 0; i < 100; ++i) {
    const StepResult r = env.StepBandwidth(1000 + 10 * i);
    EXPECT_EQ(env.call().now() - last, 50000);
    EXPECT_DOUBLE_EQ(r.info.time_ms - last_ms, 50.0);
    last = env.call().now();
    last_ms = r.info.time_ms;
  }
}

TEST(RtcEnv, RewardSequenceDeterministic) {
  TraceGenConfig gen;
  gen.seed = 4;
  auto trace = std::make_shared<NetworkTrace>(SampleTrace(gen));
  auto run = [&](uint64_t seed) {
    RtcEnv env;
    env.Reset(Config(trace, seed));
    std::vector<double> rewards;
    std::mt19937_64 rng(99);
    while (!env.done())
      rewards.push_back(
          env.Step(Action::FromRaw(
                       std::uniform_real_distribution<>(0.01, 0.99)(rng)))
              .reward);
    return rewards;
  };
  EXPECT_EQ(run(5), run(5));
  EXPECT_NE(run(5), run(6));
}

TEST(RtcEnv, RewardMatchesWindow) {
  RtcEnv env;
  env.Reset(Config(Constant(2000, 30, 0.02)));
  for (int i = 0; i < 50; ++i) {
    const StepResult r = env.StepBandwidth(1500);
    EXPECT_DOUBLE_EQ(r.reward, Reward(r.info.window));
    EXPECT_EQ(r.state, ScaleState(r.info.window));
    EXPECT_DOUBLE_EQ(r.info.capacity_kbps, 2000.0);
    EXPECT_DOUBLE_EQ(r.info.estimate_kbps, 1500.0);
  }
}

}  // namespace
}  // namespace rtclab
