#ifndef MBRL_ENVS_REGISTRY_H_
#define MBRL_ENVS_REGISTRY_H_

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mbrl/envs/env.h"
#include "mbrl/models/model_env.h"

namespace mbrl::envs {

// Unknown names raise std::invalid_argument listing the registered keys.
models::TerminationFn LookupTermination(const std::string& name);
models::RewardFn LookupReward(const std::string& name);
std::vector<std::string> TerminationNames();
std::vector<std::string> RewardNames();

// "cartpole_continuous" or "pendulum"; trial_length falls back to the
// environment default when not given.
std::unique_ptr<Env> MakeEnv(const std::string& name,
                             std::optional<std::size_t> trial_length = {});
std::vector<std::string> EnvNames();

// Default termination/reward registry keys for a built-in environment.
std::string DefaultTerminationFor(const std::string& env_name);
std::string DefaultRewardFor(const std::string& env_name);

}  // namespace mbrl::envs

#endif  // MBRL_ENVS_REGISTRY_H_
