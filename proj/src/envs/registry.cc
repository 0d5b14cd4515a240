#include "mbrl/envs/registry.h"

#include <map>
#include <stdexcept>

#include "mbrl/envs/cartpole.h"
#include "mbrl/envs/pendulum.h"

namespace mbrl::envs {
namespace {

BoolVector NoTermination(const Matrix& /*action*/, const Matrix& next_obs) {
  return BoolVector::Constant(next_obs.rows(), false);
}

const std::map<std::string, models::TerminationFn>& Terminations() {
  static const auto* fns = new std::map<std::string, models::TerminationFn>{
      {"no_termination", NoTermination},
      {"cartpole", CartPoleTermination},
      {"pendulum", PendulumTermination},
  };
  return *fns;
}

const std::map<std::string, models::RewardFn>& Rewards() {
  static const auto* fns = new std::map<std::string, models::RewardFn>{
      {"cartpole", CartPoleReward},
      {"pendulum", PendulumReward},
  };
  return *fns;
}

template <typename Map>
std::vector<std::string> Keys(const Map& m) {
  std::vector<std::string> out;
  for (const auto& [k, v] : m) out.push_back(k);
  return out;
}

std::string Join(const std::vector<std::string>& names) {
  std::string s;
  for (const auto& n : names) s += (s.empty() ? "" : ", ") + n;
  return s;
}

}  // namespace

models::TerminationFn LookupTermination(const std::string& name) {
  auto it = Terminations().find(name);
  if (it == Terminations().end()) {
    throw std::invalid_argument("unknown termination function '" + name +
                                "' (available: " + Join(TerminationNames()) + ")");
  }
  return it->second;
}

models::RewardFn LookupReward(const std::string& name) {
  auto it = Rewards().find(name);
  if (it == Rewards().end()) {
    throw std::invalid_argument("unknown reward function '" + name +
                                "' (available: " + Join(RewardNames()) + ")");
  }
  return it->second;
}

std::vector<std::string> TerminationNames() { return Keys(Terminations()); }
std::vector<std::string> RewardNames() { return Keys(Rewards()); }

std::vector<std::string> EnvNames() { return {"cartpole_continuous", "pendulum"}; }

std::unique_ptr<Env> MakeEnv(const std::string& name,
                             std::optional<std::size_t> trial_length) {
  if (name == "cartpole_continuous") {
    return std::make_unique<CartPoleContinuous>(trial_length.value_or(200));
  }
  if (name == "pendulum") {
    return std::make_unique<Pendulum>(trial_length.value_or(200));
  }
  throw std::invalid_argument("unknown environment '" + name +
                              "' (available: " + Join(EnvNames()) + ")");
}

std::string DefaultTerminationFor(const std::string& env_name) {
  if (env_name == "cartpole_continuous") return "cartpole";
  if (env_name == "pendulum") return "pendulum";
  throw std::invalid_argument("unknown environment '" + env_name + "'");
}

std::string DefaultRewardFor(const std::string& env_name) {
  return DefaultTerminationFor(env_name);
}

}  // namespace mbrl::envs
