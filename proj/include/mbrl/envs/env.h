#ifndef MBRL_ENVS_ENV_H_
#define MBRL_ENVS_ENV_H_

#include <cstddef>
#include <memory>
#include <string>

#include "mbrl/core/types.h"

namespace mbrl::envs {

struct EnvSpec {
  std::string name;
  std::size_t obs_dim = 0;
  std::size_t action_dim = 0;
  Vector action_low;
  Vector action_high;
  std::size_t trial_length = 200;
  double dt = 0.0;
};

struct EnvStep {
  Vector obs;
  double reward = 0.0;
  bool done = false;
};

// Ground-truth environment. Instances are value-like: clone() yields an
// independent copy that can be stepped without affecting the original.
class Env {
 public:
  virtual ~Env() = default;

  virtual const EnvSpec& spec() const = 0;
  virtual Vector reset(Rng& rng) = 0;
  virtual EnvStep step(const Vector& action) = 0;

  virtual Vector state() const = 0;
  virtual void set_state(const Vector& state) = 0;
  virtual std::unique_ptr<Env> clone() const = 0;
};

}  // namespace mbrl::envs

#endif  // MBRL_ENVS_ENV_H_
