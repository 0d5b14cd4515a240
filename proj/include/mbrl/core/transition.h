#ifndef MBRL_CORE_TRANSITION_H_
#define MBRL_CORE_TRANSITION_H_

#include <cstddef>
#include <span>
#include <vector>

#include "mbrl/core/types.h"

namespace mbrl {

struct Transition {
  Vector obs;
  Vector action;
  Vector next_obs;
  double reward = 0.0;
  bool done = false;
};

// Throws std::invalid_argument on inconsistent sizes or non-finite values.
void ValidateTransition(const Transition& t);

// Columnar batch of B transitions: obs and next_obs are B x S, action B x A.
struct TransitionBatch {
  Matrix obs;
  Matrix action;
  Matrix next_obs;
  Vector reward;
  BoolVector done;

  TransitionBatch() = default;
  TransitionBatch(std::size_t batch, std::size_t obs_dim, std::size_t action_dim);

  std::size_t size() const { return static_cast<std::size_t>(obs.rows()); }
  std::size_t obs_dim() const { return static_cast<std::size_t>(obs.cols()); }
  std::size_t action_dim() const {
    return static_cast<std::size_t>(action.cols());
  }

  Transition at(std::size_t i) const;
  void set(std::size_t i, const Transition& t);

  // Rows selected by `indices`, in that order (repeats allowed).
  TransitionBatch gather(std::span<const std::size_t> indices) const;

  // Throws std::invalid_argument when the fields disagree on batch size.
  void check_consistent() const;
};

// Batch with a leading ensemble axis; members[e] holds the rows for member e.
using EnsembleBatch = std::vector<TransitionBatch>;

}  // namespace mbrl

#endif  // MBRL_CORE_TRANSITION_H_
