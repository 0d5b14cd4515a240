#include "mbrl/nn/dense_net.h"

#include <cmath>
#include <random>
#include <stdexcept>

namespace mbrl::nn {

Activation ParseActivation(const std::string& name) {
  if (name == "silu") return Activation::kSilu;
  if (name == "relu") return Activation::kRelu;
  throw std::invalid_argument("unknown activation '" + name + "'");
}

std::string ActivationName(Activation act) {
  return act == Activation::kSilu ? "silu" : "relu";
}

Matrix Activate(Activation act, const Matrix& z) {
  if (act == Activation::kRelu) return z.cwiseMax(0.0);
  return z.unaryExpr([](double v) { return v / (1.0 + std::exp(-v)); });
}

Matrix ActivateDerivative(Activation act, const Matrix& z) {
  if (act == Activation::kRelu) {
    return z.unaryExpr([](double v) { return v > 0.0 ? 1.0 : 0.0; });
  }
  return z.unaryExpr([](double v) {
    const double s = 1.0 / (1.0 + std::exp(-v));
    return s * (1.0 + v * (1.0 - s));
  });
}

void GradientTape::set_zero() {
  for (auto& l : layers) {
    l.weight.setZero();
    l.bias.setZero();
  }
}

Matrix TruncatedNormalInit(std::size_t rows, std::size_t cols, Rng& rng) {
  const double stddev = 1.0 / std::sqrt(2.0 * static_cast<double>(cols));
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix w(rows, cols);
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    double v;
    do {
      v = normal(rng);
    } while (std::abs(v) > 2.0);
    w.data()[i] = v * stddev;
  }
  return w;
}

DenseNet::DenseNet(std::vector<std::size_t> layer_sizes, Activation activation,
                   Rng& rng)
    : activation_(activation) {
  if (layer_sizes.size() < 2) {
    throw std::invalid_argument("DenseNet: need at least input and output size");
  }
  for (std::size_t s : layer_sizes) {
    if (s == 0) throw std::invalid_argument("DenseNet: zero layer size");
  }
  for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
    layers_.push_back(
        DenseLayer{TruncatedNormalInit(layer_sizes[l + 1], layer_sizes[l], rng),
                   Vector::Zero(layer_sizes[l + 1])});
  }
}

DenseNet::DenseNet(std::vector<DenseLayer> layers, Activation activation)
    : layers_(std::move(layers)), activation_(activation) {
  if (layers_.empty()) throw std::invalid_argument("DenseNet: no layers");
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    if (layers_[l].bias.size() != layers_[l].weight.rows()) {
      throw std::invalid_argument("DenseNet: bias/weight mismatch");
    }
    if (l > 0 && layers_[l].weight.cols() != layers_[l - 1].weight.rows()) {
      throw std::invalid_argument("DenseNet: layer shapes do not compose");
    }
  }
}

std::size_t DenseNet::input_dim() const {
  return static_cast<std::size_t>(layers_.front().weight.cols());
}

std::size_t DenseNet::output_dim() const {
  return static_cast<std::size_t>(layers_.back().weight.rows());
}

std::size_t DenseNet::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers_) {
    n += static_cast<std::size_t>(l.weight.size() + l.bias.size());
  }
  return n;
}

void DenseNet::check_input(const Matrix& x) const {
  if (layers_.empty()) throw std::logic_error("DenseNet: uninitialized");
  if (static_cast<std::size_t>(x.cols()) != input_dim()) {
    throw std::invalid_argument("DenseNet: input has " +
                                std::to_string(x.cols()) +
                                " columns, expected " +
                                std::to_string(input_dim()));
  }
}

Matrix DenseNet::forward(const Matrix& x) const {
  check_input(x);
  Matrix h = x;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    Matrix z = h * layers_[l].weight.transpose();
    z.rowwise() += layers_[l].bias.transpose();
    h = (l + 1 < layers_.size()) ? Activate(activation_, z) : std::move(z);
  }
  return h;
}

Matrix DenseNet::forward(const Matrix& x, ForwardCache& cache) const {
  check_input(x);
  cache.inputs.clear();
  cache.pre.clear();
  Matrix h = x;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    cache.inputs.push_back(h);
    Matrix z = h * layers_[l].weight.transpose();
    z.rowwise() += layers_[l].bias.transpose();
    if (l + 1 < layers_.size()) {
      h = Activate(activation_, z);
      cache.pre.push_back(std::move(z));
    } else {
      h = std::move(z);
    }
  }
  return h;
}

GradientTape DenseNet::make_tape() const {
  GradientTape tape;
  for (const auto& l : layers_) {
    tape.layers.push_back(DenseLayer{Matrix::Zero(l.weight.rows(), l.weight.cols()),
                                     Vector::Zero(l.bias.size())});
  }
  return tape;
}

Matrix DenseNet::backward(const ForwardCache& cache, const Matrix& upstream,
                          GradientTape& tape) const {
  if (cache.empty()) {
    throw std::logic_error("DenseNet::backward called without a forward pass");
  }
  if (cache.inputs.size() != layers_.size() ||
      cache.pre.size() + 1 != layers_.size()) {
    throw std::logic_error("DenseNet::backward: cache from a different network");
  }
  if (upstream.rows() != cache.inputs.front().rows() ||
      static_cast<std::size_t>(upstream.cols()) != output_dim()) {
    throw std::invalid_argument("DenseNet::backward: upstream shape mismatch");
  }
  if (tape.layers.size() != layers_.size()) tape = make_tape();
  tape.set_zero();

  Matrix g = upstream;
  for (std::size_t l = layers_.size(); l-- > 0;) {
    tape.layers[l].weight.noalias() = g.transpose() * cache.inputs[l];
    tape.layers[l].bias = g.colwise().sum().transpose();
    Matrix g_in = g * layers_[l].weight;
    if (l > 0) {
      g = g_in.cwiseProduct(ActivateDerivative(activation_, cache.pre[l - 1]));
    } else {
      g = std::move(g_in);
    }
  }
  return g;
}

std::vector<std::span<double>> DenseNet::parameter_blocks() {
  std::vector<std::span<double>> out;
  for (auto& l : layers_) {
    out.emplace_back(l.weight.data(), static_cast<std::size_t>(l.weight.size()));
    out.emplace_back(l.bias.data(), static_cast<std::size_t>(l.bias.size()));
  }
  return out;
}

std::vector<std::span<const double>> TapeBlocks(const GradientTape& tape) {
  std::vector<std::span<const double>> out;
  for (const auto& l : tape.layers) {
    out.emplace_back(l.weight.data(), static_cast<std::size_t>(l.weight.size()));
    out.emplace_back(l.bias.data(), static_cast<std::size_t>(l.bias.size()));
  }
  return out;
}

}  // namespace mbrl::nn
