#ifndef MBRL_MODELS_ONE_DIM_MODEL_H_
#define MBRL_MODELS_ONE_DIM_MODEL_H_

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mbrl/core/normalizer.h"
#include "mbrl/core/transition.h"
#include "mbrl/core/types.h"
#include "mbrl/models/gaussian_mlp.h"
#include "mbrl/nn/adam.h"

namespace mbrl::models {

enum class Propagation { kFixedModel, kEnsembleMean };

Propagation ParsePropagation(const std::string& name);
std::string PropagationName(Propagation p);

struct OneDimModelConfig {
  bool target_is_delta = true;
  bool learned_rewards = false;
  bool normalize = true;
  Propagation propagation = Propagation::kFixedModel;
};

struct ModelSample {
  Matrix next_obs;     // P x S
  Vector reward;       // P; empty unless rewards are learned
  Matrix model_mean;   // P x T raw model means for the chosen members
  Matrix model_logvar; // P x T; empty for deterministic models
};

// Adapts flat (obs, action) vectors to an ensemble: concatenates and
// normalizes inputs, builds delta/reward targets, and maps samples back to
// next observations.
class OneDimTransitionRewardModel {
 public:
  OneDimTransitionRewardModel(GaussianMlpEnsemble model, std::size_t obs_dim,
                              std::size_t action_dim, OneDimModelConfig config);

  std::size_t obs_dim() const { return obs_dim_; }
  std::size_t action_dim() const { return action_dim_; }
  std::size_t target_dim() const {
    return obs_dim_ + (config_.learned_rewards ? 1 : 0);
  }
  const OneDimModelConfig& config() const { return config_; }
  const GaussianMlpEnsemble& ensemble() const { return model_; }
  GaussianMlpEnsemble& ensemble() { return model_; }
  const Normalizer& normalizer() const { return normalizer_; }
  Normalizer& normalizer() { return normalizer_; }

  // Normalized concat(obs, action), without a batch.
  Matrix model_input(const Matrix& obs, const Matrix& action) const;
  // (input, target) for a batch.
  std::pair<Matrix, Matrix> process_batch(const TransitionBatch& batch) const;

  // Refits input statistics on every (obs, action) row of `data`. No-op when
  // normalization is disabled.
  void update_normalizer(const TransitionBatch& data);

  std::vector<double> update(const EnsembleBatch& batch, nn::Adam& optimizer);
  std::vector<double> loss(const EnsembleBatch& batch) const;
  // E x T per-dimension MSE.
  Matrix eval_score(const TransitionBatch& batch) const;

  // Next-observation prediction. `members[p]` picks the ensemble member for
  // particle p under fixed_model propagation (ignored for ensemble_mean,
  // which averages the elite means). With `sample` set, probabilistic models
  // draw from N(mean, exp(logvar)).
  ModelSample sample(const Matrix& obs, const Matrix& action,
                     std::span<const std::size_t> members, bool sample,
                     Rng& rng) const;

  void save(const std::filesystem::path& path) const;
  static OneDimTransitionRewardModel load(const std::filesystem::path& path);

 private:
  GaussianMlpEnsemble model_;
  std::size_t obs_dim_;
  std::size_t action_dim_;
  OneDimModelConfig config_;
  Normalizer normalizer_;
};

}  // namespace mbrl::models

#endif  // MBRL_MODELS_ONE_DIM_MODEL_H_
