#include "mbrl/models/model_env.h"

#include <stdexcept>
#include <string>

namespace mbrl::models {

ModelEnv::ModelEnv(std::shared_ptr<const OneDimTransitionRewardModel> model,
                   TerminationFn termination_fn, RewardFn reward_fn)
    : model_(std::move(model)),
      termination_fn_(std::move(termination_fn)),
      reward_fn_(std::move(reward_fn)) {
  if (!model_) throw std::invalid_argument("ModelEnv: null model");
  if (!termination_fn_) {
    throw std::invalid_argument("ModelEnv: a termination function is required");
  }
  if (!reward_fn_ && !model_->config().learned_rewards) {
    throw std::invalid_argument(
        "ModelEnv: model does not learn rewards and no reward function given");
  }
}

ModelEnvState ModelEnv::reset(const Matrix& initial_obs, Rng& rng) const {
  if (initial_obs.rows() == 0) {
    throw std::invalid_argument("ModelEnv::reset: zero particles");
  }
  if (static_cast<std::size_t>(initial_obs.cols()) != obs_dim()) {
    throw std::invalid_argument("ModelEnv::reset: observation has " +
                                std::to_string(initial_obs.cols()) +
                                " columns, expected " +
                                std::to_string(obs_dim()));
  }
  const auto& elites = model_->ensemble().elites();
  std::uniform_int_distribution<std::size_t> pick(0, elites.size() - 1);
  ModelEnvState state{initial_obs, {}, BoolVector::Constant(initial_obs.rows(), false)};
  state.members.resize(static_cast<std::size_t>(initial_obs.rows()));
  for (auto& m : state.members) m = elites[pick(rng)];
  return state;
}

ModelStepResult ModelEnv::step(ModelEnvState& state, const Matrix& actions,
                               bool sample, Rng& rng) const {
  if (actions.rows() != state.obs.rows() ||
      static_cast<std::size_t>(actions.cols()) != action_dim()) {
    throw std::invalid_argument("ModelEnv::step: expected actions " +
                                std::to_string(state.obs.rows()) + "x" +
                                std::to_string(action_dim()) + ", got " +
                                std::to_string(actions.rows()) + "x" +
                                std::to_string(actions.cols()));
  }
  ModelSample pred = model_->sample(state.obs, actions, state.members, sample, rng);
  ModelStepResult out;
  out.reward = reward_fn_ ? reward_fn_(actions, pred.next_obs) : pred.reward;
  BoolVector term = termination_fn_(actions, pred.next_obs);
  out.next_obs = std::move(pred.next_obs);
  for (Eigen::Index i = 0; i < out.next_obs.rows(); ++i) {
    if (state.done(i)) {
      out.next_obs.row(i) = state.obs.row(i);
      out.reward(i) = 0.0;
    }
  }
  out.done = state.done || term;
  state.obs = out.next_obs;
  state.done = out.done;
  return out;
}

}  // namespace mbrl::models
