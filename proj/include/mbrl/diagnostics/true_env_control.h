#ifndef MBRL_DIAGNOSTICS_TRUE_ENV_CONTROL_H_
#define MBRL_DIAGNOSTICS_TRUE_ENV_CONTROL_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "mbrl/envs/env.h"
#include "mbrl/planning/agent.h"

namespace mbrl::diagnostics {

struct TrueEnvControlResult {
  std::vector<double> returns;                     // per episode
  std::vector<std::vector<double>> step_rewards;   // per episode, per step
};

// MPC whose candidate sequences are scored by replaying them on clones of
// the real environment. Episodes start from `initial_state` when given,
// otherwise from env.reset().
TrueEnvControlResult TrueEnvCemControl(
    const envs::Env& env, const planning::TrajectoryOptimizerConfig& config,
    std::size_t episodes, uint64_t seed,
    const std::optional<Vector>& initial_state = std::nullopt);

}  // namespace mbrl::diagnostics

#endif  // MBRL_DIAGNOSTICS_TRUE_ENV_CONTROL_H_
