#ifndef MBRL_CORE_ITERATORS_H_
#define MBRL_CORE_ITERATORS_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "mbrl/core/replay_buffer.h"
#include "mbrl/core/transition.h"
#include "mbrl/core/types.h"

namespace mbrl {

// Epoch-style iteration (without replacement) over a fixed subset of a
// dataset snapshot. The final batch of an epoch may be short but never empty.
class TransitionIterator {
 public:
  TransitionIterator(std::shared_ptr<const TransitionBatch> data,
                     std::vector<std::size_t> indices, std::size_t batch_size,
                     bool shuffle_each_epoch, uint64_t seed);

  std::size_t size() const { return indices_.size(); }
  std::size_t batch_size() const { return batch_size_; }
  std::size_t num_batches() const;
  const std::vector<std::size_t>& indices() const { return indices_; }

  // Runs one epoch, reshuffling first when enabled.
  void for_each_batch(const std::function<void(const TransitionBatch&)>& fn);

  // All indexed rows in index order.
  TransitionBatch all() const { return data_->gather(indices_); }

 private:
  std::shared_ptr<const TransitionBatch> data_;
  std::vector<std::size_t> indices_;
  std::size_t batch_size_;
  bool shuffle_;
  Rng rng_;
};

// Per-member bootstrap resamples, drawn once at construction. Every emitted
// batch has one entry per ensemble member.
class BootstrapIterator {
 public:
  BootstrapIterator(std::shared_ptr<const TransitionBatch> data,
                    std::vector<std::size_t> indices, std::size_t ensemble_size,
                    std::size_t batch_size, bool shuffle_each_epoch,
                    uint64_t seed);

  std::size_t ensemble_size() const { return member_indices_.size(); }
  std::size_t size() const { return indices_.size(); }
  std::size_t num_batches() const;
  const std::vector<std::vector<std::size_t>>& member_indices() const {
    return member_indices_;
  }

  void for_each_batch(const std::function<void(const EnsembleBatch&)>& fn);

  // The underlying (non-resampled) rows, for scoring.
  TransitionBatch all() const { return data_->gather(indices_); }

 private:
  std::shared_ptr<const TransitionBatch> data_;
  std::vector<std::size_t> indices_;
  std::vector<std::vector<std::size_t>> member_indices_;
  std::size_t batch_size_;
  bool shuffle_;
  Rng rng_;
};

struct TrainValSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
};

// Fresh random permutation of {0..n-1}; validation gets floor(ratio * n).
TrainValSplit SplitIndices(std::size_t n, double validation_ratio, Rng& rng);

struct SplitIterators {
  std::shared_ptr<const TransitionBatch> data;
  TransitionIterator train;
  std::optional<TransitionIterator> validation;
};

// Snapshots the buffer (oldest first) and splits it. A ratio of 0 yields no
// validation iterator.
SplitIterators TrainValSplitIterators(const ReplayBuffer& buffer,
                                      double validation_ratio,
                                      std::size_t batch_size,
                                      bool shuffle_each_epoch, Rng& rng);

}  // namespace mbrl

#endif  // MBRL_CORE_ITERATORS_H_
