#ifndef MBRL_NN_ADAM_H_
#define MBRL_NN_ADAM_H_

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace mbrl::nn {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double weight_decay = 0.0;  // L2 added to the gradient
};

class NonFiniteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bias-corrected Adam over a fixed list of parameter blocks.
class Adam {
 public:
  Adam(std::vector<std::size_t> block_sizes, AdamConfig config);

  // Throws NonFiniteError (leaving parameters untouched) if any gradient is
  // non-finite.
  void step(std::span<const std::span<double>> params,
            std::span<const std::span<const double>> grads);

  long long step_count() const { return step_count_; }
  const AdamConfig& config() const { return config_; }
  void set_learning_rate(double lr) { config_.learning_rate = lr; }

 private:
  AdamConfig config_;
  std::vector<std::vector<double>> m_;
  std::vector<std::vector<double>> v_;
  long long step_count_ = 0;
};

}  // namespace mbrl::nn

#endif  // MBRL_NN_ADAM_H_
