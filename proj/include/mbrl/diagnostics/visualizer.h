#ifndef MBRL_DIAGNOSTICS_VISUALIZER_H_
#define MBRL_DIAGNOSTICS_VISUALIZER_H_

#include <cstddef>
#include <filesystem>
#include <vector>

#include "mbrl/envs/env.h"
#include "mbrl/models/model_env.h"
#include "mbrl/planning/agent.h"

namespace mbrl::diagnostics {

struct RolloutComparison {
  Matrix actions;                  // horizon x A
  Matrix true_obs;                 // horizon x S, observation after each step
  std::vector<Matrix> model_obs;   // one horizon x S trace per model sample
};

// Drives `env` from its current state with `agent` for `horizon` steps and
// replays the same actions open-loop on `num_model_samples` model particles
// starting from the same observation. Steps past a true termination repeat
// the terminal observation.
RolloutComparison CompareRollout(const models::ModelEnv& model_env,
                                 envs::Env& env, planning::Agent& agent,
                                 std::size_t horizon,
                                 std::size_t num_model_samples, Rng& rng);

// Long format: t,dim,true,sample_0..sample_{k-1}; horizon rows per dimension.
void WriteRolloutComparison(const RolloutComparison& cmp,
                            const std::filesystem::path& path);

}  // namespace mbrl::diagnostics

#endif  // MBRL_DIAGNOSTICS_VISUALIZER_H_
