#include <cmath>
#include <memory>
#include <random>

#include "gtest/gtest.h"
#include "rtclab/common/errors.h"
#include "rtclab/env/rtc_env.h"
#include "rtclab/ukf/rule_controller.h"
#include "rtclab/ukf/ukf_estimator.h"
#include "rtclab/ukf/unscented.h"

namespace rtclab {
namespace {

Eigen::MatrixXd RandomSpd(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Eigen::MatrixXd a(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      a(r, c) = nd(rng);
  std::uniform_real_distribution<double> scale(0.01, 100.0);
  return scale(rng) * (a * a.transpose()) +
         0.1 * Eigen::MatrixXd::Identity(n, n);
}

TEST(UnscentedTest, FivePointsForTwoDims) {
  SigmaPoints sp = ComputeSigmaPoints(Eigen::Vector2d::Zero(),
                                      Eigen::Matrix2d::Identity(), UtParams{});
  EXPECT_EQ(sp.points.cols(), 5);
  EXPECT_NEAR(sp.mean_weights.sum(), 1.0, 1e-12);
}

TEST(UnscentedTest, LambdaOneGivesRootThreeSpread) {
  UtParams p;
  p.alpha = 1.0;
  p.kappa = 1.0;
  ASSERT_DOUBLE_EQ(p.Lambda(2), 1.0);
  SigmaPoints sp = ComputeSigmaPoints(Eigen::Vector2d::Zero(),
                                      Eigen::Matrix2d::Identity(), p);
  const double r3 = std::sqrt(3.0);
  for (int i = 1; i < 5; ++i) {
    EXPECT_NEAR(sp.points.col(i).cwiseAbs().maxCoeff(), r3, 1e-12);
    EXPECT_NEAR(sp.points.col(i).cwiseAbs().minCoeff(), 0.0, 1e-12);
  }
  EXPECT_NEAR(sp.points(0, 1), r3, 1e-12);
  EXPECT_NEAR(sp.points(0, 3), -r3, 1e-12);
}

TEST(UnscentedTest, WeightsAndReconstructionOverRandomSpd) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> alpha(0.05, 1.0);
  std::uniform_real_distribution<double> kappa(0.0, 3.0);
  std::normal_distribution<double> nd(0.0, 50.0);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 1 + trial % 4;
    UtParams p;
    p.alpha = alpha(rng);
    p.kappa = kappa(rng);
    Eigen::VectorXd m(n);
    for (int i = 0; i < n; ++i)
      m(i) = nd(rng);
    const Eigen::MatrixXd cov = RandomSpd(rng, n);
    SigmaPoints sp = ComputeSigmaPoints(m, cov, p);
    ASSERT_FALSE(sp.jitter_applied);
    EXPECT_NEAR(sp.mean_weights.sum(), 1.0, 1e-12) << "trial " << trial;

    Eigen::VectorXd m2;
    Eigen::MatrixXd cov2;
    WeightedMoments(sp.points, sp.mean_weights, sp.cov_weights, m2, cov2);
    // Covariance weights include the beta term at the centre, which only
    // multiplies a zero deviation.
    const double scale = 1.0 + m.cwiseAbs().maxCoeff();
    EXPECT_LT((m2 - m).cwiseAbs().maxCoeff(), 1e-9 * scale) << trial;
    const double cscale = 1.0 + cov.cwiseAbs().maxCoeff();
    EXPECT_LT((cov2 - cov).cwiseAbs().maxCoeff(), 1e-9 * cscale) << trial;
  }
}

TEST(UnscentedTest, ZeroCovarianceUsesJitter) {
  SigmaPoints sp = ComputeSigmaPoints(Eigen::Vector2d(1.0, 2.0),
                                      Eigen::Matrix2d::Zero(), UtParams{});
  EXPECT_TRUE(sp.jitter_applied);
  EXPECT_TRUE(sp.points.allFinite());
}

TEST(UnscentedTest, IndefiniteCovarianceThrowsAfterRetry) {
  Eigen::Matrix2d bad;
  bad << 1.0, 0.0, 0.0, -1.0;
  EXPECT_THROW(ComputeSigmaPoints(Eigen::Vector2d::Zero(), bad, UtParams{}),
               NumericError);
}

TEST(UnscentedTest, InvalidParams) {
  UtParams p;
  p.alpha = 0.0;
  EXPECT_THROW(ValidateUtParams(p), ValidationError);
  p.alpha = 1.5;
  EXPECT_THROW(ValidateUtParams(p), ValidationError);
  p.alpha = 0.5;
  p.kappa = -1.0;
  EXPECT_THROW(ValidateUtParams(p), ValidationError);
}

TEST(UkfStepTest, ConstantMeasurementConverges) {
  UkfState s;
  ASSERT_DOUBLE_EQ(s.mean(0), 300.0);
  for (int i = 0; i < 100; ++i) {
    const UkfStepResult r = UkfStep(s, Eigen::Vector2d(1000.0, 0.0), 1e9);
    ASSERT_FALSE(r.reinitialized);
    EXPECT_LT((s.cov - s.cov.transpose()).cwiseAbs().maxCoeff(), 1e-12);
  }
  EXPECT_NEAR(s.mean(0), 1000.0, 10.0);
  EXPECT_NEAR(s.mean(1), 0.0, 0.1);
}

TEST(UkfStepTest, NoiselessLimitTracksMeasurementInOneUpdate) {
  UkfState s;
  s.process_noise.setZero();
  s.measurement_noise = Eigen::Vector2d(1e-12, 1e-12).asDiagonal();
  UkfStep(s, Eigen::Vector2d(1000.0, 3.0), 1e9);
  EXPECT_NEAR(s.mean(0), 1000.0, 1e-3);
  EXPECT_NEAR(s.mean(1), 3.0, 1e-3);
}

TEST(UkfStepTest, ZeroCovarianceEngagesJitter) {
  UkfState s;
  s.cov.setZero();
  s.process_noise.setZero();
  const UkfStepResult r = UkfStep(s, Eigen::Vector2d(500.0, 0.0), 1e9);
  EXPECT_TRUE(r.jitter_applied);
  EXPECT_TRUE(s.mean.allFinite());
}

TEST(UkfStepTest, DivergenceReinitializesFromPrior) {
  UkfState s;
  s.cov = Eigen::Vector2d(1e9, 1.0).asDiagonal();
  s.process_noise.setZero();
  s.measurement_noise = Eigen::Vector2d(1e12, 1.0).asDiagonal();
  const UkfStepResult r = UkfStep(s, Eigen::Vector2d(500.0, 0.0), 1e9);
  EXPECT_TRUE(r.reinitialized);
  EXPECT_EQ(s.mean, s.prior_mean);
  EXPECT_EQ(s.cov, s.prior_cov);
}

TEST(UkfStepTest, NonFiniteMeasurementRejected) {
  UkfState s;
  EXPECT_THROW(UkfStep(s, Eigen::Vector2d(NAN, 0.0), 1e9), ValidationError);
}

TEST(UkfStepTest, CensoredMeasurementOnlyBoundsFromBelow) {
  // Sender-limited at 400: receive rate 400 says little about a link
  // believed to be at 3000.
  UkfState s;
  s.mean = Eigen::Vector2d(3000.0, 0.0);
  s.cov = Eigen::Vector2d(1e4, 1.0).asDiagonal();
  UkfStep(s, Eigen::Vector2d(400.0, 0.0), 400.0);
  EXPECT_GT(s.mean(0), 2500.0);
}

RuleControllerState Ctrl(RateMode mode, double est) {
  RuleControllerState c;
  c.mode = mode;
  c.estimate_kbps = est;
  return c;
}

TEST(RuleControllerTest, HoldWithZeroGradientKeepsEstimate) {
  RuleControllerState c = Ctrl(RateMode::kHold, 1234.0);
  EXPECT_DOUBLE_EQ(RuleControl(c, {1e9, 0.0, 1000.0}), 1234.0);
}

TEST(RuleControllerTest, OveruseCapsByReceiveRate) {
  RuleControllerState c = Ctrl(RateMode::kIncrease, 2000.0);
  const double est = RuleControl(c, {1e9, 5.0, 1000.0});
  EXPECT_LE(est, 850.0 + 1e-9);
  EXPECT_EQ(c.mode, RateMode::kDecrease);
}

TEST(RuleControllerTest, UnderuseGrowsGeometricallyUntilClamp) {
  RuleControllerState c = Ctrl(RateMode::kIncrease, 1000.0);
  for (int k = 1; k <= 200; ++k) {
    const double est = RuleControl(c, {1e9, -5.0, 0.0});
    const double expect = std::min(1000.0 * std::pow(1.05, k), 8000.0);
    ASSERT_NEAR(est, expect, 1e-9 * expect) << "k=" << k;
  }
  EXPECT_DOUBLE_EQ(c.estimate_kbps, 8000.0);
}

TEST(RuleControllerTest, NeverAboveFilterMean) {
  RuleControllerState c = Ctrl(RateMode::kIncrease, 1000.0);
  EXPECT_DOUBLE_EQ(RuleControl(c, {900.0, -5.0, 0.0}), 900.0);
}

TEST(RuleControllerTest, ClampFloor) {
  RuleControllerState c = Ctrl(RateMode::kIncrease, 11.0);
  EXPECT_DOUBLE_EQ(RuleControl(c, {1e9, 5.0, 1.0}), 10.0);
}

TEST(RuleControllerTest, DecreaseHoldIncreaseSequence) {
  RuleControllerState c = Ctrl(RateMode::kDecrease, 1000.0);
  EXPECT_DOUBLE_EQ(RuleControl(c, {1e9, 0.0, 1000.0}), 1000.0);
  EXPECT_EQ(c.mode, RateMode::kHold);
  EXPECT_DOUBLE_EQ(RuleControl(c, {1e9, 0.0, 1000.0}), 1000.0);
  EXPECT_EQ(c.mode, RateMode::kIncrease);
  EXPECT_DOUBLE_EQ(RuleControl(c, {1e9, 0.0, 1000.0}), 1050.0);
}

TEST(RuleControllerTest, RandomInputsStayInBoundsAndDecreaseNeverRaises) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> grad(-6.0, 6.0);
  std::uniform_real_distribution<double> rate(0.0, 9000.0);
  std::uniform_real_distribution<double> bw(5.0, 10000.0);
  RuleControllerState c;
  for (int i = 0; i < 100000; ++i) {
    const double before = c.estimate_kbps;
    const bool overuse_in_decrease = c.mode == RateMode::kDecrease;
    const RuleInputs in{bw(rng), grad(rng), rate(rng)};
    const double est = RuleControl(c, in);
    ASSERT_GE(est, 10.0);
    ASSERT_LE(est, 8000.0);
    if (in.ukf_bandwidth_kbps >= 10.0) {
      ASSERT_LE(est, in.ukf_bandwidth_kbps + 1e-9);
    }
    if (overuse_in_decrease && c.mode == RateMode::kDecrease) {
      ASSERT_LE(est, std::max(before, 10.0)) << i;
    }
  }
}

TEST(RuleControllerTest, InvalidFactors) {
  RuleControllerState c;
  c.down_factor = 1.1;
  EXPECT_THROW(ValidateRuleController(c), ValidationError);
  c = {};
  c.up_factor = 0.9;
  EXPECT_THROW(ValidateRuleController(c), ValidationError);
  c = {};
  c.underuse_threshold_ms = 3.0;
  EXPECT_THROW(ValidateRuleController(c), ValidationError);
}

std::shared_ptr<const NetworkTrace> Constant(double kbps, int64_t ms) {
  return std::make_shared<NetworkTrace>(
      std::vector<TraceSegment>{{0, {kbps, 25.0, 0.0}}}, ms);
}

class UkfStabilityTest : public ::testing::TestWithParam<double> {};

TEST_P(UkfStabilityTest, EstimateSettlesIntoBand) {
  const double cap = GetParam();
  EnvConfig cfg;
  cfg.trace = Constant(cap, 90000);
  cfg.seed = 11;
  RtcEnv env;
  env.Reset(cfg);
  UkfEstimator ukf;
  const int burn_in = 600;  // 30 s
  int step = 0;
  while (!env.done()) {
    const double est = ukf.Observe(env.last().info.window);
    env.StepBandwidth(est);
    ++step;
    if (step > burn_in) {
      ASSERT_GE(est, 0.8 * cap) << "step " << step;
      ASSERT_LE(est, 1.1 * cap) << "step " << step;
    }
    ASSERT_LT((ukf.filter().cov - ukf.filter().cov.transpose())
                  .cwiseAbs()
                  .maxCoeff(),
              1e-12);
  }
  EXPECT_EQ(step + 1, env.episode_steps());
  EXPECT_EQ(step + 1, 1800);
  EXPECT_EQ(ukf.reinitializations(), 0u);
}

INSTANTIATE_TEST_SUITE_P(Capacities, UkfStabilityTest,
                         ::testing::Values(2000.0, 5000.0));

TEST(UkfEstimatorTest, ResetRestoresInitialBehaviour) {
  EnvConfig cfg;
  cfg.trace = Constant(3000, 5000);
  auto run = [&](UkfEstimator& ukf) {
    RtcEnv env;
    env.Reset(cfg);
    ukf.Reset();
    std::vector<double> out;
    while (!env.done()) {
      out.push_back(ukf.Observe(env.last().info.window));
      env.StepBandwidth(out.back());
    }
    return out;
  };
  UkfEstimator ukf;
  const auto first = run(ukf);
  const auto second = run(ukf);
  EXPECT_EQ(first, second);
  EXPECT_EQ(ukf.name(), "ukf");
}

}  // namespace
}  // namespace rtclab
