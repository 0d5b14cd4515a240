#ifndef MBRL_ENVS_CARTPOLE_H_
#define MBRL_ENVS_CARTPOLE_H_

#include <memory>

#include "mbrl/envs/env.h"

namespace mbrl::envs {

// Cart-pole with a continuous force input: force = 10 * clip(a, -1, 1).
// State is (x, x_dot, theta, theta_dot), integrated with explicit Euler.
// Reward is 1 for every step that does not terminate.
class CartPoleContinuous : public Env {
 public:
  static constexpr double kGravity = 9.8;
  static constexpr double kMassCart = 1.0;
  static constexpr double kMassPole = 0.1;
  static constexpr double kHalfLength = 0.5;
  static constexpr double kForceMag = 10.0;
  static constexpr double kDt = 0.02;
  static constexpr double kXThreshold = 2.4;
  static constexpr double kThetaThreshold = 12.0 * 2.0 * 3.14159265358979323846 / 360.0;

  explicit CartPoleContinuous(std::size_t trial_length = 200);

  const EnvSpec& spec() const override { return spec_; }
  Vector reset(Rng& rng) override;
  EnvStep step(const Vector& action) override;
  Vector state() const override { return state_; }
  void set_state(const Vector& state) override;
  std::unique_ptr<Env> clone() const override {
    return std::make_unique<CartPoleContinuous>(*this);
  }

  static Vector Dynamics(const Vector& state, double action);
  // Row-wise Dynamics over a batch of states (N x 4) and actions (N x 1).
  static Matrix DynamicsBatch(const Matrix& states, const Matrix& actions);
  static bool Terminal(const Vector& state);

 private:
  EnvSpec spec_;
  Vector state_;
};

BoolVector CartPoleTermination(const Matrix& action, const Matrix& next_obs);
Vector CartPoleReward(const Matrix& action, const Matrix& next_obs);

}  // namespace mbrl::envs

#endif  // MBRL_ENVS_CARTPOLE_H_
