#include "mbrl/core/iterators.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <stdexcept>

namespace mbrl {
namespace {

std::size_t CeilDiv(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

}  // namespace

TransitionIterator::TransitionIterator(
    std::shared_ptr<const TransitionBatch> data,
    std::vector<std::size_t> indices, std::size_t batch_size,
    bool shuffle_each_epoch, uint64_t seed)
    : data_(std::move(data)),
      indices_(std::move(indices)),
      batch_size_(batch_size),
      shuffle_(shuffle_each_epoch),
      rng_(seed) {
  if (!data_) throw std::invalid_argument("TransitionIterator: null dataset");
  if (batch_size_ == 0) {
    throw std::invalid_argument("TransitionIterator: batch_size 0");
  }
  for (std::size_t i : indices_) {
    if (i >= data_->size()) {
      throw std::out_of_range("TransitionIterator: index out of range");
    }
  }
}

std::size_t TransitionIterator::num_batches() const {
  return CeilDiv(indices_.size(), batch_size_);
}

void TransitionIterator::for_each_batch(
    const std::function<void(const TransitionBatch&)>& fn) {
  std::vector<std::size_t> order = indices_;
  if (shuffle_) std::shuffle(order.begin(), order.end(), rng_);
  for (std::size_t start = 0; start < order.size(); start += batch_size_) {
    const std::size_t len = std::min(batch_size_, order.size() - start);
    fn(data_->gather(std::span(order).subspan(start, len)));
  }
}

BootstrapIterator::BootstrapIterator(
    std::shared_ptr<const TransitionBatch> data,
    std::vector<std::size_t> indices, std::size_t ensemble_size,
    std::size_t batch_size, bool shuffle_each_epoch, uint64_t seed)
    : data_(std::move(data)),
      indices_(std::move(indices)),
      batch_size_(batch_size),
      shuffle_(shuffle_each_epoch),
      rng_(seed) {
  if (!data_) throw std::invalid_argument("BootstrapIterator: null dataset");
  if (ensemble_size == 0) {
    throw std::invalid_argument("BootstrapIterator: ensemble size 0");
  }
  if (indices_.empty()) {
    throw std::invalid_argument("BootstrapIterator: empty dataset");
  }
  if (batch_size_ == 0) {
    throw std::invalid_argument("BootstrapIterator: batch_size 0");
  }
  const std::size_t n = indices_.size();
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  member_indices_.resize(ensemble_size);
  for (auto& member : member_indices_) {
    member.resize(n);
    for (auto& i : member) i = indices_[pick(rng_)];
  }
}

std::size_t BootstrapIterator::num_batches() const {
  return CeilDiv(indices_.size(), batch_size_);
}

void BootstrapIterator::for_each_batch(
    const std::function<void(const EnsembleBatch&)>& fn) {
  std::vector<std::vector<std::size_t>> orders = member_indices_;
  if (shuffle_) {
    for (auto& o : orders) std::shuffle(o.begin(), o.end(), rng_);
  }
  const std::size_t n = indices_.size();
  EnsembleBatch batch(orders.size());
  for (std::size_t start = 0; start < n; start += batch_size_) {
    const std::size_t len = std::min(batch_size_, n - start);
    for (std::size_t e = 0; e < orders.size(); ++e) {
      batch[e] = data_->gather(std::span(orders[e]).subspan(start, len));
    }
    fn(batch);
  }
}

TrainValSplit SplitIndices(std::size_t n, double validation_ratio, Rng& rng) {
  if (n == 0) throw std::invalid_argument("SplitIndices: empty dataset");
  if (!(validation_ratio >= 0.0 && validation_ratio < 1.0)) {
    throw std::invalid_argument("SplitIndices: ratio must be in [0, 1)");
  }
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::shuffle(perm.begin(), perm.end(), rng);
  const auto n_val = static_cast<std::size_t>(
      std::floor(validation_ratio * static_cast<double>(n)));
  TrainValSplit split;
  split.validation.assign(perm.begin(), perm.begin() + n_val);
  split.train.assign(perm.begin() + n_val, perm.end());
  return split;
}

SplitIterators TrainValSplitIterators(const ReplayBuffer& buffer,
                                      double validation_ratio,
                                      std::size_t batch_size,
                                      bool shuffle_each_epoch, Rng& rng) {
  if (buffer.empty()) {
    throw std::invalid_argument("TrainValSplitIterators: empty buffer");
  }
  auto data = std::make_shared<const TransitionBatch>(buffer.all());
  TrainValSplit split = SplitIndices(data->size(), validation_ratio, rng);
  const uint64_t train_seed = rng();
  const uint64_t val_seed = rng();
  std::optional<TransitionIterator> val;
  if (!split.validation.empty()) {
    val.emplace(data, std::move(split.validation), batch_size, false, val_seed);
  }
  return SplitIterators{
      data,
      TransitionIterator(data, std::move(split.train), batch_size,
                         shuffle_each_epoch, train_seed),
      std::move(val)};
}

}  // namespace mbrl
