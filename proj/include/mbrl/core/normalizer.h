#ifndef MBRL_CORE_NORMALIZER_H_
#define MBRL_CORE_NORMALIZER_H_

#include <cstddef>

#include "mbrl/core/types.h"

namespace mbrl {

// Per-column standardization. An unfitted normalizer is the identity.
class Normalizer {
 public:
  static constexpr double kStdFloor = 1e-8;

  explicit Normalizer(std::size_t dim);

  // Population mean/std of each column of `data` (rows are samples).
  void fit(const Matrix& data);

  Matrix normalize(const Matrix& x) const;
  Matrix denormalize(const Matrix& x) const;

  std::size_t dim() const { return static_cast<std::size_t>(mean_.size()); }
  const Vector& mean() const { return mean_; }
  const Vector& std() const { return std_; }
  std::size_t count() const { return count_; }

  // Used when restoring from a checkpoint.
  void set_stats(Vector mean, Vector std, std::size_t count);

 private:
  void check_dims(const Matrix& x) const;

  Vector mean_;
  Vector std_;
  std::size_t count_ = 0;
};

}  // namespace mbrl

#endif  // MBRL_CORE_NORMALIZER_H_
