#include "mbrl/algorithms/rollout.h"

namespace mbrl::algorithms {

RolloutStats RolloutAgentTrajectories(envs::Env& env, std::size_t num_steps,
                                      planning::Agent& agent,
                                      ReplayBuffer* buffer, Rng& rng) {
  RolloutStats stats;
  if (num_steps == 0) return stats;
  Vector obs = env.reset(rng);
  agent.reset();
  std::size_t episode_steps = 0;
  double episode_return = 0.0;
  while (stats.steps < num_steps) {
    const Vector action = agent.act(obs);
    const envs::EnvStep step = env.step(action);
    if (buffer) buffer->add(Transition{obs, action, step.obs, step.reward, step.done});
    ++stats.steps;
    ++episode_steps;
    episode_return += step.reward;
    obs = step.obs;
    if (step.done || episode_steps >= env.spec().trial_length) {
      stats.episode_returns.push_back(episode_return);
      if (stats.steps < num_steps) {
        obs = env.reset(rng);
        agent.reset();
      }
      episode_steps = 0;
      episode_return = 0.0;
    }
  }
  return stats;
}

double RunEpisode(envs::Env& env, planning::Agent& agent, Rng& rng,
                  ReplayBuffer* buffer) {
  Vector obs = env.reset(rng);
  agent.reset();
  double total = 0.0;
  for (std::size_t t = 0; t < env.spec().trial_length; ++t) {
    const Vector action = agent.act(obs);
    const envs::EnvStep step = env.step(action);
    if (buffer) buffer->add(Transition{obs, action, step.obs, step.reward, step.done});
    total += step.reward;
    obs = step.obs;
    if (step.done) break;
  }
  return total;
}

}  // namespace mbrl::algorithms
