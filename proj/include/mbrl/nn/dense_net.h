#ifndef MBRL_NN_DENSE_NET_H_
#define MBRL_NN_DENSE_NET_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mbrl/core/types.h"

namespace mbrl::nn {

enum class Activation { kSilu, kRelu };

Activation ParseActivation(const std::string& name);
std::string ActivationName(Activation act);

// Elementwise activation and its derivative with respect to the input.
Matrix Activate(Activation act, const Matrix& z);
Matrix ActivateDerivative(Activation act, const Matrix& z);

struct DenseLayer {
  Matrix weight;  // out x in
  Vector bias;    // out
};

// Per-layer values recorded by a forward pass and consumed by backward.
struct ForwardCache {
  std::vector<Matrix> inputs;  // B x in for every layer
  std::vector<Matrix> pre;     // B x out pre-activations of hidden layers
  bool empty() const { return inputs.empty(); }
};

// Gradient buffers congruent with a DenseNet's layers.
struct GradientTape {
  std::vector<DenseLayer> layers;
  void set_zero();
};

// Fully-connected network: affine layers with an activation between them and
// a linear output layer.
class DenseNet {
 public:
  DenseNet() = default;
  // `layer_sizes` = {in, hidden..., out}; at least two entries.
  DenseNet(std::vector<std::size_t> layer_sizes, Activation activation,
           Rng& rng);
  DenseNet(std::vector<DenseLayer> layers, Activation activation);

  Matrix forward(const Matrix& x) const;
  Matrix forward(const Matrix& x, ForwardCache& cache) const;

  // Overwrites `tape` with d(loss)/d(params), where `upstream` is
  // d(loss)/d(output) for the batch recorded in `cache`. Returns
  // d(loss)/d(input).
  Matrix backward(const ForwardCache& cache, const Matrix& upstream,
                  GradientTape& tape) const;

  GradientTape make_tape() const;

  std::size_t input_dim() const;
  std::size_t output_dim() const;
  std::size_t parameter_count() const;
  Activation activation() const { return activation_; }

  const std::vector<DenseLayer>& layers() const { return layers_; }
  std::vector<DenseLayer>& layers() { return layers_; }

  // Flat views over every weight and bias, in layer order (W0, b0, W1, ...).
  std::vector<std::span<double>> parameter_blocks();

 private:
  void check_input(const Matrix& x) const;

  std::vector<DenseLayer> layers_;
  Activation activation_ = Activation::kSilu;
};

std::vector<std::span<const double>> TapeBlocks(const GradientTape& tape);

// Fan-in truncated normal: std = 1/sqrt(2 * fan_in), cut at two std.
Matrix TruncatedNormalInit(std::size_t rows, std::size_t cols, Rng& rng);

}  // namespace mbrl::nn

#endif  // MBRL_NN_DENSE_NET_H_
