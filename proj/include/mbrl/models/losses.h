#ifndef MBRL_MODELS_LOSSES_H_
#define MBRL_MODELS_LOSSES_H_

#include "mbrl/core/types.h"

namespace mbrl::models {

// Sum over rows of the squared Euclidean distance between pred and target.
double MseLoss(const Matrix& pred, const Matrix& target);

// Sum over rows of (mu - s)^T diag(exp(-logvar)) (mu - s) + sum(logvar), i.e.
// the diagonal Gaussian negative log likelihood without its constant term.
double GaussianNllLoss(const Matrix& mean, const Matrix& logvar,
                       const Matrix& target);

// Softplus computed without overflow for large inputs.
double Softplus(double x);
double Sigmoid(double x);

}  // namespace mbrl::models

#endif  // MBRL_MODELS_LOSSES_H_
