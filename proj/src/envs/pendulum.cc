#include "mbrl/envs/pendulum.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mbrl::envs {

double WrapAngle(double theta) {
  const double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(theta + std::numbers::pi, two_pi);
  if (r < 0) r += two_pi;
  return r - std::numbers::pi;
}

Pendulum::Pendulum(std::size_t trial_length) : state_(Vector::Zero(2)) {
  if (trial_length == 0) throw std::invalid_argument("Pendulum: trial_length 0");
  spec_.name = "pendulum";
  spec_.obs_dim = 2;
  spec_.action_dim = 1;
  spec_.action_low = Vector::Constant(1, -kMaxTorque);
  spec_.action_high = Vector::Constant(1, kMaxTorque);
  spec_.trial_length = trial_length;
  spec_.dt = kDt;
}

Vector Pendulum::reset(Rng& rng) {
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  std::uniform_real_distribution<double> speed(-1.0, 1.0);
  state_(0) = angle(rng);
  state_(1) = speed(rng);
  return state_;
}

void Pendulum::set_state(const Vector& state) {
  if (state.size() != 2) throw std::invalid_argument("Pendulum: state size");
  state_ = state;
}

double Pendulum::Cost(const Vector& s, double torque) {
  const double u = std::clamp(torque, -kMaxTorque, kMaxTorque);
  const double th = WrapAngle(s(0));
  return th * th + 0.1 * s(1) * s(1) + 0.001 * u * u;
}

Vector Pendulum::Dynamics(const Vector& s, double torque) {
  const double u = std::clamp(torque, -kMaxTorque, kMaxTorque);
  const double th = s(0), th_dot = s(1);
  const double th_acc = 3.0 * kGravity / (2.0 * kLength) * std::sin(th) +
                        3.0 / (kMass * kLength * kLength) * u;
  Vector next(2);
  next(0) = th + kDt * th_dot;
  next(1) = std::clamp(th_dot + kDt * th_acc, -kMaxSpeed, kMaxSpeed);
  return next;
}

EnvStep Pendulum::step(const Vector& action) {
  if (action.size() != 1) throw std::invalid_argument("Pendulum: action size");
  const double reward = -Cost(state_, action(0));
  state_ = Dynamics(state_, action(0));
  return EnvStep{state_, reward, false};
}

BoolVector PendulumTermination(const Matrix& /*action*/, const Matrix& next_obs) {
  return BoolVector::Constant(next_obs.rows(), false);
}

Vector PendulumReward(const Matrix& action, const Matrix& next_obs) {
  Vector r(next_obs.rows());
  for (Eigen::Index i = 0; i < next_obs.rows(); ++i) {
    r(i) = -Pendulum::Cost(next_obs.row(i).transpose(), action(i, 0));
  }
  return r;
}

}  // namespace mbrl::envs
