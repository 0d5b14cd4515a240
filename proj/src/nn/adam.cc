#include "mbrl/nn/adam.h"

#include <cmath>

namespace mbrl::nn {

Adam::Adam(std::vector<std::size_t> block_sizes, AdamConfig config)
    : config_(config) {
  for (std::size_t n : block_sizes) {
    m_.emplace_back(n, 0.0);
    v_.emplace_back(n, 0.0);
  }
}

void Adam::step(std::span<const std::span<double>> params,
                std::span<const std::span<const double>> grads) {
  if (params.size() != m_.size() || grads.size() != m_.size()) {
    throw std::invalid_argument("Adam::step: block count mismatch");
  }
  for (std::size_t b = 0; b < m_.size(); ++b) {
    if (params[b].size() != m_[b].size() || grads[b].size() != m_[b].size()) {
      throw std::invalid_argument("Adam::step: block size mismatch");
    }
    for (double g : grads[b]) {
      if (!std::isfinite(g)) throw NonFiniteError("Adam::step: non-finite gradient");
    }
  }
  ++step_count_;
  const double t = static_cast<double>(step_count_);
  const double c1 = 1.0 - std::pow(config_.beta1, t);
  const double c2 = 1.0 - std::pow(config_.beta2, t);
  for (std::size_t b = 0; b < m_.size(); ++b) {
    auto& m = m_[b];
    auto& v = v_[b];
    for (std::size_t i = 0; i < m.size(); ++i) {
      const double g = grads[b][i] + config_.weight_decay * params[b][i];
      m[i] = config_.beta1 * m[i] + (1.0 - config_.beta1) * g;
      v[i] = config_.beta2 * v[i] + (1.0 - config_.beta2) * g * g;
      const double m_hat = m[i] / c1;
      const double v_hat = v[i] / c2;
      params[b][i] -=
          config_.learning_rate * m_hat / (std::sqrt(v_hat) + config_.epsilon);
    }
  }
}

}  // namespace mbrl::nn
