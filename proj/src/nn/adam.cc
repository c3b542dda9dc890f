#include "daat/nn/adam.h"

#include <cmath>

#include "daat/errors.h"

namespace daat::nn {

void adam_step(Tensor& param, const Tensor& grad, AdamMoments& state, const AdamConfig& cfg) {
  if (param.shape() != grad.shape()) {
    throw InvalidInput("adam: parameter " + shape_string(param.shape()) + " vs gradient " +
                       shape_string(grad.shape()));
  }
  if (state.m.shape() != param.shape()) {
    state.m = Tensor(param.shape());
    state.v = Tensor(param.shape());
    state.step = 0;
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(cfg.beta1, t);
  const double c2 = 1.0 - std::pow(cfg.beta2, t);
  for (std::size_t i = 0; i < param.size(); ++i) {
    const double g = grad[i];
    state.m[i] = cfg.beta1 * state.m[i] + (1.0 - cfg.beta1) * g;
    state.v[i] = cfg.beta2 * state.v[i] + (1.0 - cfg.beta2) * g * g;
    const double m_hat = state.m[i] / c1;
    const double v_hat = state.v[i] / c2;
    param[i] -= cfg.lr * m_hat / (std::sqrt(v_hat) + cfg.eps);
  }
}

void Adam::step(const std::vector<Parameter*>& params) {
  for (Parameter* p : params) {
    adam_step(p->value, p->grad, state_[p], cfg_);
    p->grad.fill(0.0);
  }
}

const AdamMoments* Adam::moments(const Parameter* p) const {
  auto it = state_.find(p);
  return it == state_.end() ? nullptr : &it->second;
}

}  // namespace daat::nn
