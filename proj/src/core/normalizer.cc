#include "mbrl/core/normalizer.h"

#include <stdexcept>
#include <string>

namespace mbrl {

Normalizer::Normalizer(std::size_t dim)
    : mean_(Vector::Zero(dim)), std_(Vector::Ones(dim)) {}

void Normalizer::fit(const Matrix& data) {
  if (data.rows() == 0) throw std::invalid_argument("Normalizer::fit: no rows");
  check_dims(data);
  mean_ = data.colwise().mean().transpose();
  const Matrix centered = data.rowwise() - mean_.transpose();
  std_ = (centered.array().square().colwise().sum() /
          static_cast<double>(data.rows()))
             .sqrt()
             .transpose()
             .max(kStdFloor);
  count_ = static_cast<std::size_t>(data.rows());
}

Matrix Normalizer::normalize(const Matrix& x) const {
  check_dims(x);
  return (x.rowwise() - mean_.transpose()).array().rowwise() /
         std_.transpose().array();
}

Matrix Normalizer::denormalize(const Matrix& x) const {
  check_dims(x);
  return (x.array().rowwise() * std_.transpose().array()).matrix().rowwise() +
         mean_.transpose();
}

void Normalizer::set_stats(Vector mean, Vector std, std::size_t count) {
  if (mean.size() != mean_.size() || std.size() != std_.size()) {
    throw std::invalid_argument("Normalizer::set_stats: dimension mismatch");
  }
  mean_ = std::move(mean);
  std_ = std.cwiseMax(kStdFloor);
  count_ = count;
}

void Normalizer::check_dims(const Matrix& x) const {
  if (x.cols() != mean_.size()) {
    throw std::invalid_argument("Normalizer: expected " +
                                std::to_string(mean_.size()) +
                                " columns, got " + std::to_string(x.cols()));
  }
}

}  // namespace mbrl
