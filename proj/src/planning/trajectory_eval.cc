#include "mbrl/planning/trajectory_eval.h"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mbrl::planning {

Vector EvaluateActionSequences(const models::ModelEnv& model_env,
                               const Vector& initial_obs,
                               const Matrix& sequences,
                               const TrajectoryEvalSpec& spec, Rng& rng) {
  const auto a = static_cast<Eigen::Index>(model_env.action_dim());
  const auto h = static_cast<Eigen::Index>(spec.horizon);
  const auto p = static_cast<Eigen::Index>(spec.particles);
  const Eigen::Index n = sequences.rows();
  if (h < 1 || p < 1) {
    throw std::invalid_argument("EvaluateActionSequences: horizon and particles must be >= 1");
  }
  if (sequences.cols() != a * h) {
    throw std::invalid_argument("EvaluateActionSequences: sequences have " +
                                std::to_string(sequences.cols()) +
                                " columns, expected horizon*action_dim = " +
                                std::to_string(a * h));
  }
  // Particle row i*P + j simulates sequence i.
  const Matrix init = initial_obs.transpose().replicate(n * p, 1);
  models::ModelEnvState state = model_env.reset(init, rng);
  Vector totals = Vector::Zero(n * p);
  Matrix actions(n * p, a);
  for (Eigen::Index t = 0; t < h; ++t) {
    for (Eigen::Index i = 0; i < n; ++i) {
      actions.middleRows(i * p, p) =
          sequences.row(i).segment(t * a, a).replicate(p, 1);
    }
    totals += model_env.step(state, actions, spec.sample, rng).reward;
  }
  Vector values(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double v = totals.segment(i * p, p).mean();
    values(i) = std::isfinite(v) ? v : -std::numeric_limits<double>::infinity();
  }
  return values;
}

std::unique_ptr<TrajectoryOptimizerAgent> MakeModelMpcAgent(
    std::shared_ptr<const models::ModelEnv> model_env,
    TrajectoryOptimizerConfig config, TrajectoryEvalSpec eval_spec,
    Vector action_low, Vector action_high, uint64_t seed) {
  if (!model_env) throw std::invalid_argument("MakeModelMpcAgent: null model env");
  eval_spec.horizon = config.horizon;
  TrajectoryEvaluator evaluator = [model_env, eval_spec](const Vector& obs,
                                                         const Matrix& seqs,
                                                         Rng& rng) {
    return EvaluateActionSequences(*model_env, obs, seqs, eval_spec, rng);
  };
  return std::make_unique<TrajectoryOptimizerAgent>(
      std::move(config), std::move(action_low), std::move(action_high),
      std::move(evaluator), seed);
}

Vector EvaluateOnTrueEnv(const envs::Env& env, const Vector& state,
                         const Matrix& sequences, std::size_t horizon) {
  const auto a = static_cast<Eigen::Index>(env.spec().action_dim);
  const auto h = static_cast<Eigen::Index>(horizon);
  if (sequences.cols() != a * h) {
    throw std::invalid_argument("EvaluateOnTrueEnv: sequence width mismatch");
  }
  Vector values(sequences.rows());
  for (Eigen::Index i = 0; i < sequences.rows(); ++i) {
    auto clone = env.clone();
    clone->set_state(state);
    double total = 0.0;
    for (Eigen::Index t = 0; t < h; ++t) {
      const envs::EnvStep s = clone->step(sequences.row(i).segment(t * a, a).transpose());
      total += s.reward;
      if (s.done) break;
    }
    values(i) = std::isfinite(total) ? total
                                     : -std::numeric_limits<double>::infinity();
  }
  return values;
}

}  // namespace mbrl::planning
