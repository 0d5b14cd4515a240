#ifndef MBRL_PLANNING_TRAJECTORY_EVAL_H_
#define MBRL_PLANNING_TRAJECTORY_EVAL_H_

#include <cstddef>
#include <memory>

#include "mbrl/core/types.h"
#include "mbrl/envs/env.h"
#include "mbrl/models/model_env.h"
#include "mbrl/planning/agent.h"

namespace mbrl::planning {

struct TrajectoryEvalSpec {
  std::size_t horizon = 15;
  std::size_t particles = 20;
  bool sample = true;  // draw from the model's predictive distribution
};

// Predicted return of each flattened sequence (row of `sequences`, time-major
// with action_dim entries per step): every sequence is rolled out on
// `spec.particles` model particles and the summed rewards are averaged over
// particles. Sequences whose rollout produces non-finite values get -inf.
Vector EvaluateActionSequences(const models::ModelEnv& model_env,
                               const Vector& initial_obs,
                               const Matrix& sequences,
                               const TrajectoryEvalSpec& spec, Rng& rng);

// MPC agent that plans through `model_env`.
std::unique_ptr<TrajectoryOptimizerAgent> MakeModelMpcAgent(
    std::shared_ptr<const models::ModelEnv> model_env,
    TrajectoryOptimizerConfig config, TrajectoryEvalSpec eval_spec,
    Vector action_low, Vector action_high, uint64_t seed);

// Return of each sequence when replayed on a clone of `env` set to
// `state`. Rollouts stop at termination.
Vector EvaluateOnTrueEnv(const envs::Env& env, const Vector& state,
                         const Matrix& sequences, std::size_t horizon);

}  // namespace mbrl::planning

#endif  // MBRL_PLANNING_TRAJECTORY_EVAL_H_
