#include "mbrl/models/losses.h"

#include <cmath>
#include <stdexcept>

namespace mbrl::models {
namespace {

void CheckSameShape(const Matrix& a, const Matrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument(std::string(what) + ": shape mismatch");
  }
}

}  // namespace

double MseLoss(const Matrix& pred, const Matrix& target) {
  CheckSameShape(pred, target, "MseLoss");
  return (pred - target).squaredNorm();
}

double GaussianNllLoss(const Matrix& mean, const Matrix& logvar,
                       const Matrix& target) {
  CheckSameShape(mean, target, "GaussianNllLoss");
  CheckSameShape(logvar, target, "GaussianNllLoss");
  if (!mean.allFinite() || !logvar.allFinite() || !target.allFinite()) {
    throw std::invalid_argument("GaussianNllLoss: non-finite input");
  }
  const auto sq = (mean - target).array().square();
  return (sq * (-logvar.array()).exp() + logvar.array()).sum();
}

double Softplus(double x) {
  // log(1 + e^x) = max(x, 0) + log1p(e^-|x|)
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

double Sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace mbrl::models
