#include "rtclab/nn/adam.h"

#include <cmath>

#include "rtclab/common/errors.h"

namespace rtclab::nn {

Adam::Adam(AdamConfig cfg, std::vector<Parameter*> params) : cfg_(cfg) {
  if (!(cfg_.lr > 0.0) || !(cfg_.beta1 >= 0.0 && cfg_.beta1 < 1.0) ||
      !(cfg_.beta2 >= 0.0 && cfg_.beta2 < 1.0) || !(cfg_.eps > 0.0))
    throw ValidationError("invalid Adam configuration");
  for (Parameter* p : params) {
    m_.emplace_back(p->value.rows(), p->value.cols());
    v_.emplace_back(p->value.rows(), p->value.cols());
  }
  params_ = std::move(params);
}

void Adam::Rebind(std::vector<Parameter*> params) {
  if (params.size() != params_.size())
    throw ValidationError("Adam rebind: parameter count changed");
  for (std::size_t i = 0; i < params.size(); ++i)
    if (!params[i]->value.SameShape(m_[i]))
      throw ValidationError("Adam rebind: shape of " + params[i]->name +
                            " changed");
  params_ = std::move(params);
}

void Adam::Step() {
  ++steps_;
  const double c1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(steps_));
  const double c2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(steps_));
  for (std::size_t k = 0; k < params_.size(); ++k) {
    Parameter& p = *params_[k];
    if (!p.grad.SameShape(p.value))
      throw ValidationError("gradient shape mismatch for " + p.name);
    double* w = p.value.data();
    const double* g = p.grad.data();
    double* m = m_[k].data();
    double* v = v_[k].data();
    for (std::size_t i = 0; i < p.value.size(); ++i) {
      m[i] = cfg_.beta1 * m[i] + (1.0 - cfg_.beta1) * g[i];
      v[i] = cfg_.beta2 * v[i] + (1.0 - cfg_.beta2) * g[i] * g[i];
      const double m_hat = m[i] / c1;
      const double v_hat = v[i] / c2;
      w[i] -= cfg_.lr * m_hat / (std::sqrt(v_hat) + cfg_.eps);
    }
  }
}

double ClipGradNorm(const std::vector<Parameter*>& params, double max_norm) {
  double sq = 0.0;
  for (const Parameter* p : params)
    for (double g : p->grad.values())
      sq += g * g;
  const double norm = std::sqrt(sq);
  if (norm > max_norm && norm > 0.0) {
    const double scale = max_norm / norm;
    for (Parameter* p : params)
      for (double& g : p->grad.values())
        g *= scale;
  }
  return norm;
}

}  // namespace rtclab::nn
