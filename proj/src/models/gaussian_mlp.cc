#include "mbrl/models/gaussian_mlp.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "mbrl/core/number_format.h"
#include "mbrl/models/losses.h"

namespace mbrl::models {

GaussianMlpEnsemble::GaussianMlpEnsemble(const GaussianMlpConfig& config,
                                         Rng& rng)
    : config_(config) {
  if (config_.in_size == 0 || config_.out_size == 0) {
    throw std::invalid_argument("GaussianMlpEnsemble: zero in/out size");
  }
  if (config_.ensemble_size == 0) {
    throw std::invalid_argument("GaussianMlpEnsemble: ensemble_size 0");
  }
  if (config_.num_elites > config_.ensemble_size) {
    throw std::invalid_argument("GaussianMlpEnsemble: num_elites > ensemble_size");
  }
  if (config_.min_logvar_init >= config_.max_logvar_init) {
    throw std::invalid_argument("GaussianMlpEnsemble: min_logvar >= max_logvar");
  }
  std::vector<std::size_t> sizes{config_.in_size};
  for (std::size_t l = 0; l < config_.num_layers; ++l) {
    sizes.push_back(config_.hid_size);
  }
  sizes.push_back(config_.deterministic ? config_.out_size
                                        : 2 * config_.out_size);
  for (std::size_t e = 0; e < config_.ensemble_size; ++e) {
    members_.emplace_back(sizes, config_.activation, rng);
    min_logvar_.push_back(Vector::Constant(config_.out_size,
                                           config_.min_logvar_init));
    max_logvar_.push_back(Vector::Constant(config_.out_size,
                                           config_.max_logvar_init));
  }
  elites_.resize(config_.ensemble_size);
  std::iota(elites_.begin(), elites_.end(), std::size_t{0});
}

MemberOutput GaussianMlpEnsemble::split_head(std::size_t member,
                                             const Matrix& raw) const {
  const auto t = static_cast<Eigen::Index>(config_.out_size);
  if (config_.deterministic) return MemberOutput{raw, Matrix()};
  MemberOutput out{raw.leftCols(t), Matrix(raw.rows(), t)};
  const Vector& lo = min_logvar_[member];
  const Vector& hi = max_logvar_[member];
  for (Eigen::Index r = 0; r < raw.rows(); ++r) {
    for (Eigen::Index c = 0; c < t; ++c) {
      const double upper = hi(c) - Softplus(hi(c) - raw(r, t + c));
      out.logvar(r, c) = lo(c) + Softplus(upper - lo(c));
    }
  }
  return out;
}

MemberOutput GaussianMlpEnsemble::forward_member(std::size_t member,
                                                 const Matrix& x) const {
  if (member >= members_.size()) {
    throw std::out_of_range("GaussianMlpEnsemble: member index");
  }
  return split_head(member, members_[member].forward(x));
}

void GaussianMlpEnsemble::check_member_inputs(
    std::span<const Matrix> inputs) const {
  if (inputs.size() != members_.size()) {
    throw std::invalid_argument("GaussianMlpEnsemble: expected " +
                                std::to_string(members_.size()) +
                                " member inputs, got " +
                                std::to_string(inputs.size()));
  }
}

std::vector<MemberOutput> GaussianMlpEnsemble::forward(
    std::span<const Matrix> inputs) const {
  check_member_inputs(inputs);
  std::vector<MemberOutput> out;
  out.reserve(members_.size());
  for (std::size_t e = 0; e < members_.size(); ++e) {
    out.push_back(forward_member(e, inputs[e]));
  }
  return out;
}

std::vector<MemberOutput> GaussianMlpEnsemble::forward(const Matrix& x) const {
  std::vector<MemberOutput> out;
  out.reserve(members_.size());
  for (std::size_t e = 0; e < members_.size(); ++e) {
    out.push_back(forward_member(e, x));
  }
  return out;
}

Matrix GaussianMlpEnsemble::mean_predict(const Matrix& x) const {
  Matrix sum = Matrix::Zero(x.rows(), config_.out_size);
  for (std::size_t e : elites_) sum += forward_member(e, x).mean;
  return sum / static_cast<double>(elites_.size());
}

std::vector<double> GaussianMlpEnsemble::loss(
    std::span<const Matrix> inputs, std::span<const Matrix> targets) const {
  check_member_inputs(inputs);
  check_member_inputs(targets);
  std::vector<double> out(members_.size());
  for (std::size_t e = 0; e < members_.size(); ++e) {
    const MemberOutput o = forward_member(e, inputs[e]);
    const double rows = static_cast<double>(inputs[e].rows());
    if (config_.deterministic) {
      out[e] = MseLoss(o.mean, targets[e]) / rows;
    } else {
      out[e] = GaussianNllLoss(o.mean, o.logvar, targets[e]) / rows +
               config_.logvar_bound_coef *
                   (max_logvar_[e].sum() - min_logvar_[e].sum());
    }
  }
  return out;
}

std::vector<double> GaussianMlpEnsemble::update(std::span<const Matrix> inputs,
                                                std::span<const Matrix> targets,
                                                nn::Adam& optimizer) {
  check_member_inputs(inputs);
  check_member_inputs(targets);
  const auto t = static_cast<Eigen::Index>(config_.out_size);
  std::vector<double> losses(members_.size());
  std::vector<nn::GradientTape> tapes(members_.size());
  std::vector<Vector> grad_min(members_.size()), grad_max(members_.size());

  for (std::size_t e = 0; e < members_.size(); ++e) {
    const Matrix& x = inputs[e];
    const Matrix& y = targets[e];
    if (y.rows() != x.rows() || y.cols() != t) {
      throw std::invalid_argument("GaussianMlpEnsemble::update: target shape");
    }
    const double inv_rows = 1.0 / static_cast<double>(x.rows());
    nn::ForwardCache cache;
    const Matrix raw = members_[e].forward(x, cache);
    Matrix upstream(raw.rows(), raw.cols());
    if (config_.deterministic) {
      const Matrix diff = raw - y;
      losses[e] = diff.squaredNorm() * inv_rows;
      upstream = 2.0 * inv_rows * diff;
    } else {
      const Vector& lo = min_logvar_[e];
      const Vector& hi = max_logvar_[e];
      grad_min[e] = Vector::Constant(t, -config_.logvar_bound_coef);
      grad_max[e] = Vector::Constant(t, config_.logvar_bound_coef);
      double total = 0.0;
      for (Eigen::Index r = 0; r < raw.rows(); ++r) {
        for (Eigen::Index c = 0; c < t; ++c) {
          const double z = raw(r, t + c);
          const double upper = hi(c) - Softplus(hi(c) - z);
          const double lv = lo(c) + Softplus(upper - lo(c));
          const double diff = raw(r, c) - y(r, c);
          const double inv_var = std::exp(-lv);
          total += diff * diff * inv_var + lv;
          const double d_lv = inv_rows * (1.0 - diff * diff * inv_var);
          const double s_hi = Sigmoid(hi(c) - z);
          const double s_lo = Sigmoid(upper - lo(c));
          upstream(r, c) = 2.0 * inv_rows * diff * inv_var;
          upstream(r, t + c) = d_lv * s_lo * s_hi;
          grad_max[e](c) += d_lv * s_lo * (1.0 - s_hi);
          grad_min[e](c) += d_lv * (1.0 - s_lo);
        }
      }
      losses[e] = total * inv_rows +
                  config_.logvar_bound_coef * (hi.sum() - lo.sum());
    }
    if (!std::isfinite(losses[e])) {
      throw nn::NonFiniteError("non-finite loss for ensemble member " +
                               std::to_string(e));
    }
    members_[e].backward(cache, upstream, tapes[e]);
  }

  std::vector<std::span<const double>> grads;
  for (std::size_t e = 0; e < members_.size(); ++e) {
    for (auto b : nn::TapeBlocks(tapes[e])) grads.push_back(b);
    if (!config_.deterministic) {
      grads.emplace_back(grad_min[e].data(), grad_min[e].size());
      grads.emplace_back(grad_max[e].data(), grad_max[e].size());
    }
  }
  const auto params = parameter_blocks();
  optimizer.step(params, grads);
  return losses;
}

Matrix GaussianMlpEnsemble::eval_score(const Matrix& x,
                                       const Matrix& target) const {
  if (target.rows() != x.rows() ||
      static_cast<std::size_t>(target.cols()) != config_.out_size) {
    throw std::invalid_argument("GaussianMlpEnsemble::eval_score: target shape");
  }
  Matrix scores(members_.size(), config_.out_size);
  for (std::size_t e = 0; e < members_.size(); ++e) {
    const Matrix mean = forward_member(e, x).mean;
    scores.row(static_cast<Eigen::Index>(e)) =
        (mean - target).array().square().colwise().mean();
  }
  return scores;
}

void GaussianMlpEnsemble::set_elites(std::vector<std::size_t> elites) {
  if (elites.empty()) throw std::invalid_argument("set_elites: empty set");
  for (std::size_t e : elites) {
    if (e >= members_.size()) {
      throw std::out_of_range("set_elites: member index out of range");
    }
  }
  elites_ = std::move(elites);
}

std::size_t GaussianMlpEnsemble::num_elites() const { return elites_.size(); }

std::size_t GaussianMlpEnsemble::target_num_elites() const {
  return config_.num_elites == 0 ? members_.size() : config_.num_elites;
}

std::vector<std::span<double>> GaussianMlpEnsemble::parameter_blocks() {
  std::vector<std::span<double>> out;
  for (std::size_t e = 0; e < members_.size(); ++e) {
    for (auto b : members_[e].parameter_blocks()) out.push_back(b);
    if (!config_.deterministic) {
      out.emplace_back(min_logvar_[e].data(), min_logvar_[e].size());
      out.emplace_back(max_logvar_[e].data(), max_logvar_[e].size());
    }
  }
  return out;
}

nn::Adam GaussianMlpEnsemble::make_optimizer(const nn::AdamConfig& config) {
  std::vector<std::size_t> sizes;
  for (auto b : parameter_blocks()) sizes.push_back(b.size());
  return nn::Adam(std::move(sizes), config);
}

void GaussianMlpEnsemble::set_logvar_bounds(std::size_t e, Vector min_lv,
                                            Vector max_lv) {
  if (min_lv.size() != min_logvar_.at(e).size() ||
      max_lv.size() != max_logvar_.at(e).size()) {
    throw std::invalid_argument("set_logvar_bounds: dimension mismatch");
  }
  min_logvar_[e] = std::move(min_lv);
  max_logvar_[e] = std::move(max_lv);
}

void GaussianMlpEnsemble::save_to(nn::Checkpoint& ckpt) const {
  auto& m = ckpt.meta;
  m["ensemble.in_size"] = std::to_string(config_.in_size);
  m["ensemble.out_size"] = std::to_string(config_.out_size);
  m["ensemble.ensemble_size"] = std::to_string(config_.ensemble_size);
  m["ensemble.num_elites"] = std::to_string(config_.num_elites);
  m["ensemble.num_layers"] = std::to_string(config_.num_layers);
  m["ensemble.hid_size"] = std::to_string(config_.hid_size);
  m["ensemble.activation"] = nn::ActivationName(config_.activation);
  m["ensemble.deterministic"] = config_.deterministic ? "1" : "0";
  m["ensemble.min_logvar_init"] = FormatDouble(config_.min_logvar_init);
  m["ensemble.max_logvar_init"] = FormatDouble(config_.max_logvar_init);
  m["ensemble.logvar_bound_coef"] = FormatDouble(config_.logvar_bound_coef);
  Matrix elites(1, elites_.size());
  for (std::size_t i = 0; i < elites_.size(); ++i) {
    elites(0, static_cast<Eigen::Index>(i)) = static_cast<double>(elites_[i]);
  }
  ckpt.add("ensemble.elites", elites);
  for (std::size_t e = 0; e < members_.size(); ++e) {
    const std::string p = "ensemble.member" + std::to_string(e);
    nn::AddNet(ckpt, p, members_[e]);
    ckpt.add(p + ".min_logvar", min_logvar_[e]);
    ckpt.add(p + ".max_logvar", max_logvar_[e]);
  }
}

GaussianMlpEnsemble GaussianMlpEnsemble::load_from(const nn::Checkpoint& ckpt) {
  auto num = [&](const char* key) {
    return static_cast<std::size_t>(ParseInt(ckpt.meta_at(key)));
  };
  GaussianMlpEnsemble out;
  auto& c = out.config_;
  c.in_size = num("ensemble.in_size");
  c.out_size = num("ensemble.out_size");
  c.ensemble_size = num("ensemble.ensemble_size");
  c.num_elites = num("ensemble.num_elites");
  c.num_layers = num("ensemble.num_layers");
  c.hid_size = num("ensemble.hid_size");
  c.activation = nn::ParseActivation(ckpt.meta_at("ensemble.activation"));
  c.deterministic = ckpt.meta_at("ensemble.deterministic") == "1";
  c.min_logvar_init = ParseDouble(ckpt.meta_at("ensemble.min_logvar_init"));
  c.max_logvar_init = ParseDouble(ckpt.meta_at("ensemble.max_logvar_init"));
  c.logvar_bound_coef = ParseDouble(ckpt.meta_at("ensemble.logvar_bound_coef"));
  for (std::size_t e = 0; e < c.ensemble_size; ++e) {
    const std::string p = "ensemble.member" + std::to_string(e);
    out.members_.push_back(nn::GetNet(ckpt, p));
    out.min_logvar_.push_back(ckpt.get(p + ".min_logvar").reshaped());
    out.max_logvar_.push_back(ckpt.get(p + ".max_logvar").reshaped());
    const auto expected_out = c.deterministic ? c.out_size : 2 * c.out_size;
    if (out.members_.back().input_dim() != c.in_size ||
        out.members_.back().output_dim() != expected_out) {
      throw std::runtime_error("checkpoint: member " + std::to_string(e) +
                               " shape disagrees with metadata");
    }
  }
  std::vector<std::size_t> elites;
  for (double v : ckpt.get("ensemble.elites").reshaped()) {
    elites.push_back(static_cast<std::size_t>(v));
  }
  out.set_elites(std::move(elites));
  return out;
}

std::vector<std::size_t> SelectElites(std::span<const double> scores,
                                      std::size_t k) {
  if (k == 0 || k > scores.size()) {
    throw std::invalid_argument("SelectElites: k out of range");
  }
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto key = [&](std::size_t i) {
    return std::isfinite(scores[i]) ? scores[i]
                                    : std::numeric_limits<double>::infinity();
  };
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
  order.resize(k);
  std::sort(order.begin(), order.end());
  return order;
}

}  // namespace mbrl::models
