#include "mbrl/envs/cartpole.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mbrl::envs {

CartPoleContinuous::CartPoleContinuous(std::size_t trial_length)
    : state_(Vector::Zero(4)) {
  if (trial_length == 0) throw std::invalid_argument("CartPole: trial_length 0");
  spec_.name = "cartpole_continuous";
  spec_.obs_dim = 4;
  spec_.action_dim = 1;
  spec_.action_low = Vector::Constant(1, -1.0);
  spec_.action_high = Vector::Constant(1, 1.0);
  spec_.trial_length = trial_length;
  spec_.dt = kDt;
}

Vector CartPoleContinuous::reset(Rng& rng) {
  std::uniform_real_distribution<double> u(-0.05, 0.05);
  for (Eigen::Index i = 0; i < 4; ++i) state_(i) = u(rng);
  return state_;
}

void CartPoleContinuous::set_state(const Vector& state) {
  if (state.size() != 4) throw std::invalid_argument("CartPole: state size");
  state_ = state;
}

Vector CartPoleContinuous::Dynamics(const Vector& s, double action) {
  const double force = kForceMag * std::clamp(action, -1.0, 1.0);
  const double x = s(0), x_dot = s(1), theta = s(2), theta_dot = s(3);
  const double total_mass = kMassCart + kMassPole;
  const double polemass_length = kMassPole * kHalfLength;
  const double cos_t = std::cos(theta);
  const double sin_t = std::sin(theta);
  const double temp =
      (force + polemass_length * theta_dot * theta_dot * sin_t) / total_mass;
  const double theta_acc =
      (kGravity * sin_t - cos_t * temp) /
      (kHalfLength * (4.0 / 3.0 - kMassPole * cos_t * cos_t / total_mass));
  const double x_acc = temp - polemass_length * theta_acc * cos_t / total_mass;
  Vector next(4);
  next << x + kDt * x_dot, x_dot + kDt * x_acc, theta + kDt * theta_dot,
      theta_dot + kDt * theta_acc;
  return next;
}

Matrix CartPoleContinuous::DynamicsBatch(const Matrix& states,
                                         const Matrix& actions) {
  if (states.cols() != 4 || actions.cols() != 1 ||
      states.rows() != actions.rows()) {
    throw std::invalid_argument("CartPole::DynamicsBatch: shape mismatch");
  }
  Matrix out(states.rows(), 4);
  for (Eigen::Index i = 0; i < states.rows(); ++i) {
    out.row(i) = Dynamics(states.row(i).transpose(), actions(i, 0)).transpose();
  }
  return out;
}

bool CartPoleContinuous::Terminal(const Vector& s) {
  return std::abs(s(0)) > kXThreshold || std::abs(s(2)) > kThetaThreshold;
}

EnvStep CartPoleContinuous::step(const Vector& action) {
  if (action.size() != 1) throw std::invalid_argument("CartPole: action size");
  state_ = Dynamics(state_, action(0));
  const bool done = Terminal(state_);
  return EnvStep{state_, done ? 0.0 : 1.0, done};
}

BoolVector CartPoleTermination(const Matrix& /*action*/, const Matrix& next_obs) {
  BoolVector done(next_obs.rows());
  for (Eigen::Index i = 0; i < next_obs.rows(); ++i) {
    done(i) = std::abs(next_obs(i, 0)) > CartPoleContinuous::kXThreshold ||
              std::abs(next_obs(i, 2)) > CartPoleContinuous::kThetaThreshold;
  }
  return done;
}

Vector CartPoleReward(const Matrix& action, const Matrix& next_obs) {
  return (!CartPoleTermination(action, next_obs)).cast<double>().matrix();
}

}  // namespace mbrl::envs
