#ifndef MBRL_CORE_REPLAY_BUFFER_H_
#define MBRL_CORE_REPLAY_BUFFER_H_

#include <cstddef>
#include <filesystem>
#include <vector>

#include "mbrl/core/transition.h"
#include "mbrl/core/types.h"

namespace mbrl {

// Bounded FIFO transition store. Slots are overwritten oldest-first once the
// buffer is full.
class ReplayBuffer {
 public:
  ReplayBuffer(std::size_t capacity, std::size_t obs_dim,
               std::size_t action_dim);

  void add(const Transition& t);

  // Uniform sampling with replacement.
  TransitionBatch sample(std::size_t batch_size, Rng& rng) const;

  // Raw slot access (slot order, not insertion order).
  Transition slot(std::size_t i) const;

  // Slot indices ordered oldest to newest.
  std::vector<std::size_t> chronological_slots() const;

  // Every stored transition, oldest first.
  TransitionBatch all() const;

  std::size_t size() const { return size_; }
  std::size_t capacity() const { return capacity_; }
  std::size_t obs_dim() const { return obs_dim_; }
  std::size_t action_dim() const { return action_dim_; }
  bool empty() const { return size_ == 0; }

  // Text format: header "S A size capacity", then one row per transition
  // (oldest first): obs... action... next_obs... reward done.
  void save(const std::filesystem::path& path) const;
  static ReplayBuffer load(const std::filesystem::path& path);

 private:
  std::size_t capacity_;
  std::size_t obs_dim_;
  std::size_t action_dim_;
  std::size_t size_ = 0;
  std::size_t cursor_ = 0;
  TransitionBatch storage_;
};

}  // namespace mbrl

#endif  // MBRL_CORE_REPLAY_BUFFER_H_
