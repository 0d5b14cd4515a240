#include "mbrl/core/transition.h"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mbrl {

void ValidateTransition(const Transition& t) {
  if (t.obs.size() < 1 || t.action.size() < 1) {
    throw std::invalid_argument("transition: empty obs or action");
  }
  if (t.obs.size() != t.next_obs.size()) {
    throw std::invalid_argument("transition: obs has length " +
                                std::to_string(t.obs.size()) +
                                " but next_obs has length " +
                                std::to_string(t.next_obs.size()));
  }
  if (!t.obs.allFinite() || !t.action.allFinite() || !t.next_obs.allFinite() ||
      !std::isfinite(t.reward)) {
    throw std::invalid_argument("transition: non-finite field");
  }
}

TransitionBatch::TransitionBatch(std::size_t batch, std::size_t obs_dim,
                                 std::size_t action_dim)
    : obs(Matrix::Zero(batch, obs_dim)),
      action(Matrix::Zero(batch, action_dim)),
      next_obs(Matrix::Zero(batch, obs_dim)),
      reward(Vector::Zero(batch)),
      done(BoolVector::Constant(batch, false)) {}

Transition TransitionBatch::at(std::size_t i) const {
  if (i >= size()) throw std::out_of_range("TransitionBatch::at");
  const auto r = static_cast<Eigen::Index>(i);
  return Transition{obs.row(r).transpose(), action.row(r).transpose(),
                    next_obs.row(r).transpose(), reward(r), done(r)};
}

void TransitionBatch::set(std::size_t i, const Transition& t) {
  if (i >= size()) throw std::out_of_range("TransitionBatch::set");
  const auto r = static_cast<Eigen::Index>(i);
  obs.row(r) = t.obs.transpose();
  action.row(r) = t.action.transpose();
  next_obs.row(r) = t.next_obs.transpose();
  reward(r) = t.reward;
  done(r) = t.done;
}

TransitionBatch TransitionBatch::gather(
    std::span<const std::size_t> indices) const {
  TransitionBatch out(indices.size(), obs_dim(), action_dim());
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const auto src = static_cast<Eigen::Index>(indices[k]);
    if (indices[k] >= size()) throw std::out_of_range("TransitionBatch::gather");
    const auto dst = static_cast<Eigen::Index>(k);
    out.obs.row(dst) = obs.row(src);
    out.action.row(dst) = action.row(src);
    out.next_obs.row(dst) = next_obs.row(src);
    out.reward(dst) = reward(src);
    out.done(dst) = done(src);
  }
  return out;
}

void TransitionBatch::check_consistent() const {
  const auto b = obs.rows();
  if (action.rows() != b || next_obs.rows() != b || reward.size() != b ||
      done.size() != b || next_obs.cols() != obs.cols()) {
    throw std::invalid_argument("TransitionBatch: inconsistent field shapes");
  }
}

}  // namespace mbrl
