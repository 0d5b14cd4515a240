#include "mbrl/diagnostics/true_env_control.h"

#include "mbrl/planning/trajectory_eval.h"

namespace mbrl::diagnostics {

TrueEnvControlResult TrueEnvCemControl(
    const envs::Env& env, const planning::TrajectoryOptimizerConfig& config,
    std::size_t episodes, uint64_t seed,
    const std::optional<Vector>& initial_state) {
  TrueEnvControlResult result;
  auto live = env.clone();
  const std::size_t horizon = config.horizon;
  // `live` is only read by the evaluator while act() runs, never stepped.
  planning::TrajectoryEvaluator evaluator =
      [&live, horizon](const Vector& /*obs*/, const Matrix& seqs, Rng& /*rng*/) {
        return planning::EvaluateOnTrueEnv(*live, live->state(), seqs, horizon);
      };
  planning::TrajectoryOptimizerAgent agent(config, env.spec().action_low,
                                           env.spec().action_high, evaluator,
                                           MixSeed(seed, 1));
  Rng rng(MixSeed(seed, 2));
  for (std::size_t ep = 0; ep < episodes; ++ep) {
    Vector obs = live->reset(rng);
    if (initial_state) {
      live->set_state(*initial_state);
      obs = *initial_state;
    }
    agent.reset();
    double total = 0.0;
    std::vector<double> rewards;
    for (std::size_t t = 0; t < env.spec().trial_length; ++t) {
      const Vector action = agent.act(obs);
      const envs::EnvStep step = live->step(action);
      rewards.push_back(step.reward);
      total += step.reward;
      obs = step.obs;
      if (step.done) break;
    }
    result.returns.push_back(total);
    result.step_rewards.push_back(std::move(rewards));
  }
  return result;
}

}  // namespace mbrl::diagnostics
