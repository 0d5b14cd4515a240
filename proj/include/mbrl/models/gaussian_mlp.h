#ifndef MBRL_MODELS_GAUSSIAN_MLP_H_
#define MBRL_MODELS_GAUSSIAN_MLP_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mbrl/core/types.h"
#include "mbrl/nn/adam.h"
#include "mbrl/nn/checkpoint.h"
#include "mbrl/nn/dense_net.h"

namespace mbrl::models {

struct GaussianMlpConfig {
  std::size_t in_size = 0;
  std::size_t out_size = 0;  // target dimensionality
  std::size_t ensemble_size = 1;
  std::size_t num_elites = 0;  // 0 means every member
  std::size_t num_layers = 4;  // hidden layers
  std::size_t hid_size = 200;
  nn::Activation activation = nn::Activation::kSilu;
  bool deterministic = false;
  double min_logvar_init = -10.0;
  double max_logvar_init = 0.5;
  double logvar_bound_coef = 0.01;
};

// Per-member head outputs. `logvar` is empty for deterministic models.
struct MemberOutput {
  Matrix mean;
  Matrix logvar;
};

// E independent MLPs. Probabilistic members emit a mean and a log-variance per
// target dimension; the log-variance is squashed into learnable soft bounds
//   lv = max - softplus(max - raw);  lv = min + softplus(lv - min).
class GaussianMlpEnsemble {
 public:
  GaussianMlpEnsemble(const GaussianMlpConfig& config, Rng& rng);

  const GaussianMlpConfig& config() const { return config_; }
  std::size_t ensemble_size() const { return members_.size(); }
  std::size_t in_size() const { return config_.in_size; }
  std::size_t out_size() const { return config_.out_size; }
  bool deterministic() const { return config_.deterministic; }

  MemberOutput forward_member(std::size_t member, const Matrix& x) const;
  // One input per member.
  std::vector<MemberOutput> forward(std::span<const Matrix> inputs) const;
  // Same input broadcast to every member.
  std::vector<MemberOutput> forward(const Matrix& x) const;

  // Arithmetic mean of the elite members' mean predictions.
  Matrix mean_predict(const Matrix& x) const;

  // Per-member training loss averaged over rows: Gaussian NLL plus the
  // log-variance bound penalty, or MSE when deterministic.
  std::vector<double> loss(std::span<const Matrix> inputs,
                           std::span<const Matrix> targets) const;

  // Computes per-member losses and their gradients, then applies one
  // optimizer step. Member e only sees inputs[e]/targets[e]. Returns the
  // pre-step losses. Throws nn::NonFiniteError without touching parameters
  // if any loss or gradient is non-finite.
  std::vector<double> update(std::span<const Matrix> inputs,
                             std::span<const Matrix> targets,
                             nn::Adam& optimizer);

  // E x out matrix of per-dimension MSE (mean over rows); every member is
  // scored on the same rows.
  Matrix eval_score(const Matrix& x, const Matrix& target) const;

  const std::vector<std::size_t>& elites() const { return elites_; }
  void set_elites(std::vector<std::size_t> elites);
  std::size_t num_elites() const;
  // Elite count the trainer selects (config value, 0 meaning every member).
  std::size_t target_num_elites() const;

  nn::Adam make_optimizer(const nn::AdamConfig& config);
  std::vector<std::span<double>> parameter_blocks();

  const nn::DenseNet& member(std::size_t e) const { return members_.at(e); }
  nn::DenseNet& member(std::size_t e) { return members_.at(e); }
  const Vector& min_logvar(std::size_t e) const { return min_logvar_.at(e); }
  const Vector& max_logvar(std::size_t e) const { return max_logvar_.at(e); }
  void set_logvar_bounds(std::size_t e, Vector min_lv, Vector max_lv);

  void save_to(nn::Checkpoint& ckpt) const;
  static GaussianMlpEnsemble load_from(const nn::Checkpoint& ckpt);

 private:
  GaussianMlpEnsemble() = default;
  void check_member_inputs(std::span<const Matrix> inputs) const;
  MemberOutput split_head(std::size_t member, const Matrix& raw) const;

  GaussianMlpConfig config_;
  std::vector<nn::DenseNet> members_;
  std::vector<Vector> min_logvar_;
  std::vector<Vector> max_logvar_;
  std::vector<std::size_t> elites_;
};

// Indices of the `k` lowest scores (ties broken by index), ascending.
std::vector<std::size_t> SelectElites(std::span<const double> scores,
                                      std::size_t k);

}  // namespace mbrl::models

#endif  // MBRL_MODELS_GAUSSIAN_MLP_H_
