#ifndef MBRL_MODELS_MODEL_ENV_H_
#define MBRL_MODELS_MODEL_ENV_H_

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include "mbrl/core/types.h"
#include "mbrl/models/one_dim_model.h"

namespace mbrl::models {

// (action batch, next_obs batch) -> per-row value.
using TerminationFn = std::function<BoolVector(const Matrix&, const Matrix&)>;
using RewardFn = std::function<Vector(const Matrix&, const Matrix&)>;

struct ModelEnvState {
  Matrix obs;                        // P x S
  std::vector<std::size_t> members;  // fixed_model assignment per particle
  BoolVector done;                   // P
};

struct ModelStepResult {
  Matrix next_obs;
  Vector reward;
  BoolVector done;
};

// A learned model presented as a batched environment. Particles that reach a
// terminal state are frozen: their observation is held and reward is zero.
class ModelEnv {
 public:
  // `reward_fn` may be empty when the model learns rewards; when given it
  // takes precedence over the learned reward head.
  ModelEnv(std::shared_ptr<const OneDimTransitionRewardModel> model,
           TerminationFn termination_fn, RewardFn reward_fn = {});

  // Each particle is assigned a uniformly sampled elite member that stays
  // fixed for the episode.
  ModelEnvState reset(const Matrix& initial_obs, Rng& rng) const;

  ModelStepResult step(ModelEnvState& state, const Matrix& actions,
                       bool sample, Rng& rng) const;

  const OneDimTransitionRewardModel& model() const { return *model_; }
  std::size_t obs_dim() const { return model_->obs_dim(); }
  std::size_t action_dim() const { return model_->action_dim(); }

 private:
  std::shared_ptr<const OneDimTransitionRewardModel> model_;
  TerminationFn termination_fn_;
  RewardFn reward_fn_;
};

}  // namespace mbrl::models

#endif  // MBRL_MODELS_MODEL_ENV_H_
