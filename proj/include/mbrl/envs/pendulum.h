#ifndef MBRL_ENVS_PENDULUM_H_
#define MBRL_ENVS_PENDULUM_H_

#include <memory>

#include "mbrl/envs/env.h"

namespace mbrl::envs {

// Torque-limited pendulum swing-up. State (theta, theta_dot) with theta = 0
// upright. Reward is -(wrap(theta)^2 + 0.1 theta_dot^2 + 0.001 u^2) evaluated
// at the pre-step state; the episode never terminates.
class Pendulum : public Env {
 public:
  static constexpr double kGravity = 10.0;
  static constexpr double kMass = 1.0;
  static constexpr double kLength = 1.0;
  static constexpr double kDt = 0.05;
  static constexpr double kMaxSpeed = 8.0;
  static constexpr double kMaxTorque = 2.0;

  explicit Pendulum(std::size_t trial_length = 200);

  const EnvSpec& spec() const override { return spec_; }
  // Uniform theta in [-pi, pi], theta_dot in [-1, 1].
  Vector reset(Rng& rng) override;
  EnvStep step(const Vector& action) override;
  Vector state() const override { return state_; }
  void set_state(const Vector& state) override;
  std::unique_ptr<Env> clone() const override {
    return std::make_unique<Pendulum>(*this);
  }

  static Vector Dynamics(const Vector& state, double torque);
  static double Cost(const Vector& state, double torque);

 private:
  EnvSpec spec_;
  Vector state_;
};

// Angle wrapped into [-pi, pi).
double WrapAngle(double theta);

BoolVector PendulumTermination(const Matrix& action, const Matrix& next_obs);
Vector PendulumReward(const Matrix& action, const Matrix& next_obs);

}  // namespace mbrl::envs

#endif  // MBRL_ENVS_PENDULUM_H_
