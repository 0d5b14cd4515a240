#include "mbrl/planning/agent.h"

#include <random>
#include <stdexcept>

namespace mbrl::planning {

Matrix Agent::plan(const Vector& obs) {
  const Vector a = act(obs);
  return a.transpose();
}

RandomAgent::RandomAgent(Vector low, Vector high, uint64_t seed)
    : low_(std::move(low)), high_(std::move(high)), rng_(seed) {
  if (low_.size() != high_.size() || (low_.array() > high_.array()).any()) {
    throw std::invalid_argument("RandomAgent: invalid action bounds");
  }
}

Vector RandomAgent::act(const Vector& /*obs*/) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Vector a(low_.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    a(i) = low_(i) + (high_(i) - low_(i)) * u(rng_);
  }
  return a;
}

TrajectoryOptimizerAgent::TrajectoryOptimizerAgent(
    TrajectoryOptimizerConfig config, Vector action_low, Vector action_high,
    TrajectoryEvaluator evaluator, uint64_t seed)
    : config_(std::move(config)),
      action_low_(std::move(action_low)),
      action_high_(std::move(action_high)),
      evaluator_(std::move(evaluator)),
      rng_(seed) {
  if (config_.horizon == 0) {
    throw std::invalid_argument("TrajectoryOptimizerAgent: horizon must be >= 1");
  }
  if (action_low_.size() == 0 || action_low_.size() != action_high_.size()) {
    throw std::invalid_argument("TrajectoryOptimizerAgent: invalid action bounds");
  }
  if (!evaluator_) {
    throw std::invalid_argument("TrajectoryOptimizerAgent: missing evaluator");
  }
  const auto a = action_low_.size();
  const auto h = static_cast<Eigen::Index>(config_.horizon);
  config_.cem.lower = action_low_.replicate(h, 1);
  config_.cem.upper = action_high_.replicate(h, 1);
  if (config_.cem.initial_variance.size() == 1 && a > 1) {
    config_.cem.initial_variance =
        Vector::Constant(a * h, config_.cem.initial_variance(0));
  } else if (config_.cem.initial_variance.size() == a) {
    config_.cem.initial_variance = config_.cem.initial_variance.replicate(h, 1);
  } else if (config_.cem.initial_variance.size() == 0) {
    config_.cem.initial_variance =
        ((action_high_ - action_low_).array().square() / 16.0)
            .matrix()
            .replicate(h, 1);
  }
  config_.cem.validate(static_cast<std::size_t>(a * h));
  reset();
}

void TrajectoryOptimizerAgent::reset() {
  const auto h = static_cast<Eigen::Index>(config_.horizon);
  previous_solution_ = (0.5 * (action_low_ + action_high_)).replicate(h, 1);
  last_result_.reset();
}

Matrix TrajectoryOptimizerAgent::plan(const Vector& obs) {
  const auto a = action_low_.size();
  const auto h = static_cast<Eigen::Index>(config_.horizon);
  Objective objective = [&](const Matrix& candidates) {
    return evaluator_(obs, candidates, rng_);
  };
  CemResult result = CemOptimize(objective, config_.cem, previous_solution_, rng_);
  Matrix sequence = result.solution.reshaped(a, h).transpose();
  if (config_.warm_start) {
    Vector shifted(a * h);
    shifted.head(a * (h - 1)) = result.solution.tail(a * (h - 1));
    shifted.tail(a) = 0.5 * (action_low_ + action_high_);
    previous_solution_ = shifted;
  }
  last_result_ = std::move(result);
  return sequence;
}

Vector TrajectoryOptimizerAgent::act(const Vector& obs) {
  return plan(obs).row(0).transpose();
}

}  // namespace mbrl::planning
