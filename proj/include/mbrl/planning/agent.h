#ifndef MBRL_PLANNING_AGENT_H_
#define MBRL_PLANNING_AGENT_H_

#include <cstdint>
#include <functional>
#include <optional>

#include "mbrl/core/types.h"
#include "mbrl/planning/cem.h"

namespace mbrl::planning {

class Agent {
 public:
  virtual ~Agent() = default;

  virtual Vector act(const Vector& obs) = 0;
  // Action sequence (rows are time steps). Defaults to a single act() call.
  virtual Matrix plan(const Vector& obs);
  // Called at the start of each episode.
  virtual void reset() {}
};

// Uniform actions over the box [low, high].
class RandomAgent : public Agent {
 public:
  RandomAgent(Vector low, Vector high, uint64_t seed);
  Vector act(const Vector& obs) override;

 private:
  Vector low_;
  Vector high_;
  Rng rng_;
};

// Scores N flattened action sequences (N x horizon*A, time-major) from `obs`.
using TrajectoryEvaluator =
    std::function<Vector(const Vector& obs, const Matrix& sequences, Rng& rng)>;

struct TrajectoryOptimizerConfig {
  std::size_t horizon = 15;
  CemConfig cem;  // bounds and variance are filled in per horizon step
  bool warm_start = true;
};

// Model-predictive controller: optimizes an action sequence with CEM on every
// call and executes its first action. The previous solution, shifted one step
// with the box centre appended, seeds the next optimization.
class TrajectoryOptimizerAgent : public Agent {
 public:
  TrajectoryOptimizerAgent(TrajectoryOptimizerConfig config, Vector action_low,
                           Vector action_high, TrajectoryEvaluator evaluator,
                           uint64_t seed);

  Vector act(const Vector& obs) override;
  Matrix plan(const Vector& obs) override;
  void reset() override;

  const std::optional<CemResult>& last_result() const { return last_result_; }
  std::size_t horizon() const { return config_.horizon; }

 private:
  TrajectoryOptimizerConfig config_;
  Vector action_low_;
  Vector action_high_;
  TrajectoryEvaluator evaluator_;
  Rng rng_;
  Vector previous_solution_;
  std::optional<CemResult> last_result_;
};

}  // namespace mbrl::planning

#endif  // MBRL_PLANNING_AGENT_H_
