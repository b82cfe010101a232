#ifndef RTCLAB_UKF_UNSCENTED_H_
#define RTCLAB_UKF_UNSCENTED_H_

#include <Eigen/Dense>

namespace rtclab {

// Scaled unscented transform parameters; lambda = alpha^2 (n + kappa) - n.
struct UtParams {
  double alpha = 0.5;
  double beta = 2.0;
  double kappa = 0.0;

  double Lambda(int n) const { return alpha * alpha * (n + kappa) - n; }
};

void ValidateUtParams(const UtParams& p);

struct SigmaPoints {
  Eigen::MatrixXd points;  // n x (2n + 1); column 0 is the mean
  Eigen::VectorXd mean_weights;
  Eigen::VectorXd cov_weights;
  bool jitter_applied = false;
};

// Columns mean, mean + L_i, mean - L_i with L L^T = (n + lambda) cov.
// On Cholesky failure adds 1e-9 I once and retries, then throws
// NumericError.
SigmaPoints ComputeSigmaPoints(const Eigen::VectorXd& mean,
                               const Eigen::MatrixXd& cov,
                               const UtParams& params);

// Weighted mean and covariance of a point set (used both for moment
// recovery and for propagated points).
void WeightedMoments(const Eigen::MatrixXd& points,
                     const Eigen::VectorXd& mean_weights,
                     const Eigen::VectorXd& cov_weights,
                     Eigen::VectorXd& mean, Eigen::MatrixXd& cov);

// State: [available bandwidth (kb/s), queuing-delay gradient (ms/step)].
struct UkfState {
  Eigen::Vector2d mean{300.0, 0.0};
  Eigen::Matrix2d cov = Eigen::Vector2d(1.0e5, 25.0).asDiagonal();
  Eigen::Matrix2d process_noise = Eigen::Vector2d(2.5e3, 1.0).asDiagonal();
  Eigen::Matrix2d measurement_noise =
      Eigen::Vector2d(2.5e4, 4.0).asDiagonal();
  UtParams ut;

  Eigen::Vector2d prior_mean{300.0, 0.0};
  Eigen::Matrix2d prior_cov = Eigen::Vector2d(1.0e5, 25.0).asDiagonal();
};

struct UkfStepResult {
  double bandwidth_kbps = 0.0;
  double delay_gradient_ms = 0.0;
  bool reinitialized = false;
  bool jitter_applied = false;
};

inline constexpr double kUkfDivergenceTrace = 1e8;

// Random-walk predict, then update with measurement
// z = [receive rate (kb/s), RTT delta (ms)] and model
// h(x) = [min(x_bw, last_sent_kbps), x_grad].
UkfStepResult UkfStep(UkfState& state, const Eigen::Vector2d& z,
                      double last_sent_kbps);

}  // namespace rtclab

#endif  // RTCLAB_UKF_UNSCENTED_H_
