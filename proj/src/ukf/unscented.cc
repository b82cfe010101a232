#include "rtclab/ukf/unscented.h"

#include <algorithm>
#include <cmath>

#include "rtclab/common/errors.h"

namespace rtclab {
namespace {

constexpr double kJitter = 1e-9;

void Symmetrize(Eigen::Matrix2d& m) { m = 0.5 * (m + m.transpose()).eval(); }

void Reinitialize(UkfState& state) {
  state.mean = state.prior_mean;
  state.cov = state.prior_cov;
}

}  // namespace

void ValidateUtParams(const UtParams& p) {
  if (!(p.alpha > 0.0 && p.alpha <= 1.0))
    throw ValidationError("UT alpha must be in (0, 1]");
  if (!(p.kappa >= 0.0))
    throw ValidationError("UT kappa must be >= 0");
}

SigmaPoints ComputeSigmaPoints(const Eigen::VectorXd& mean,
                               const Eigen::MatrixXd& cov,
                               const UtParams& params) {
  ValidateUtParams(params);
  const auto n = static_cast<int>(mean.size());
  if (cov.rows() != n || cov.cols() != n)
    throw ValidationError("covariance shape does not match mean");
  const double lambda = params.Lambda(n);
  const double spread = n + lambda;

  SigmaPoints sp;
  Eigen::LLT<Eigen::MatrixXd> llt(spread * cov);
  if (llt.info() != Eigen::Success) {
    sp.jitter_applied = true;
    llt.compute(spread *
                (cov + kJitter * Eigen::MatrixXd::Identity(n, n)));
    if (llt.info() != Eigen::Success)
      throw NumericError("covariance not positive definite after jitter");
  }
  const Eigen::MatrixXd root = llt.matrixL();

  sp.points.resize(n, 2 * n + 1);
  sp.points.col(0) = mean;
  for (int i = 0; i < n; ++i) {
    sp.points.col(1 + i) = mean + root.col(i);
    sp.points.col(1 + n + i) = mean - root.col(i);
  }

  sp.mean_weights = Eigen::VectorXd::Constant(2 * n + 1, 0.5 / spread);
  sp.cov_weights = sp.mean_weights;
  sp.mean_weights(0) = lambda / spread;
  sp.cov_weights(0) =
      lambda / spread + (1.0 - params.alpha * params.alpha + params.beta);
  return sp;
}

void WeightedMoments(const Eigen::MatrixXd& points,
                     const Eigen::VectorXd& mean_weights,
                     const Eigen::VectorXd& cov_weights, Eigen::VectorXd& mean,
                     Eigen::MatrixXd& cov) {
  mean = points * mean_weights;
  const Eigen::MatrixXd dev = points.colwise() - mean;
  cov = dev * cov_weights.asDiagonal() * dev.transpose();
}

UkfStepResult UkfStep(UkfState& state, const Eigen::Vector2d& z,
                      double last_sent_kbps) {
  if (!z.allFinite())
    throw ValidationError("UKF measurement must be finite");
  UkfStepResult result;

  // Predict: random walk, so points propagate unchanged.
  SigmaPoints sp = ComputeSigmaPoints(state.mean, state.cov, state.ut);
  result.jitter_applied |= sp.jitter_applied;
  Eigen::VectorXd pred_mean;
  Eigen::MatrixXd pred_cov;
  WeightedMoments(sp.points, sp.mean_weights, sp.cov_weights, pred_mean,
                  pred_cov);
  Eigen::Matrix2d p_pred = pred_cov + state.process_noise;
  Symmetrize(p_pred);

  // Update.
  sp = ComputeSigmaPoints(pred_mean, p_pred, state.ut);
  result.jitter_applied |= sp.jitter_applied;
  Eigen::MatrixXd zs(2, sp.points.cols());
  for (Eigen::Index i = 0; i < sp.points.cols(); ++i) {
    zs(0, i) = std::min(sp.points(0, i), last_sent_kbps);
    zs(1, i) = sp.points(1, i);
  }
  Eigen::VectorXd z_mean;
  Eigen::MatrixXd s;
  WeightedMoments(zs, sp.mean_weights, sp.cov_weights, z_mean, s);
  s += state.measurement_noise;

  const Eigen::MatrixXd x_dev = sp.points.colwise() - pred_mean;
  const Eigen::MatrixXd z_dev = zs.colwise() - z_mean;
  const Eigen::Matrix2d cross =
      x_dev * sp.cov_weights.asDiagonal() * z_dev.transpose();
  const Eigen::Matrix2d gain = cross * s.inverse();

  state.mean = pred_mean + gain * (z - z_mean);
  state.cov = p_pred - gain * s * gain.transpose();
  Symmetrize(state.cov);

  const bool finite = state.mean.allFinite() && state.cov.allFinite();
  if (!finite || state.cov.trace() > kUkfDivergenceTrace) {
    Reinitialize(state);
    result.reinitialized = true;
  } else if (Eigen::LLT<Eigen::Matrix2d>(state.cov).info() !=
             Eigen::Success) {
    // Negative central covariance weight can leave P indefinite when the
    // min() in h(x) bites; repair once, otherwise restart from priors.
    state.cov += kJitter * Eigen::Matrix2d::Identity();
    result.jitter_applied = true;
    if (Eigen::LLT<Eigen::Matrix2d>(state.cov).info() != Eigen::Success) {
      Reinitialize(state);
      result.reinitialized = true;
    }
  }
  result.bandwidth_kbps = state.mean(0);
  result.delay_gradient_ms = state.mean(1);
  return result;
}

}  // namespace rtclab
