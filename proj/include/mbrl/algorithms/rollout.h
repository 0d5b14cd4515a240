#ifndef MBRL_ALGORITHMS_ROLLOUT_H_
#define MBRL_ALGORITHMS_ROLLOUT_H_

#include <cstddef>
#include <vector>

#include "mbrl/core/replay_buffer.h"
#include "mbrl/envs/env.h"
#include "mbrl/planning/agent.h"

namespace mbrl::algorithms {

struct RolloutStats {
  std::size_t steps = 0;
  std::vector<double> episode_returns;  // completed episodes only
};

// Runs episodes until exactly `num_steps` transitions were taken, resetting on
// termination or when an episode reaches the environment's trial length.
// Every transition is appended to `buffer` when given; stored done flags are
// true only on terminating steps.
RolloutStats RolloutAgentTrajectories(envs::Env& env, std::size_t num_steps,
                                      planning::Agent& agent,
                                      ReplayBuffer* buffer, Rng& rng);

// One full episode (up to trial length) from a fresh reset.
double RunEpisode(envs::Env& env, planning::Agent& agent, Rng& rng,
                  ReplayBuffer* buffer = nullptr);

}  // namespace mbrl::algorithms

#endif  // MBRL_ALGORITHMS_ROLLOUT_H_
