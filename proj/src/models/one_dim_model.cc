#include "mbrl/models/one_dim_model.h"

#include <cmath>
#include <random>
#include <stdexcept>

#include "mbrl/core/number_format.h"

namespace mbrl::models {

Propagation ParsePropagation(const std::string& name) {
  if (name == "fixed_model") return Propagation::kFixedModel;
  if (name == "ensemble_mean") return Propagation::kEnsembleMean;
  throw std::invalid_argument("unknown propagation method '" + name +
                              "' (known: fixed_model, ensemble_mean)");
}

std::string PropagationName(Propagation p) {
  return p == Propagation::kFixedModel ? "fixed_model" : "ensemble_mean";
}

OneDimTransitionRewardModel::OneDimTransitionRewardModel(
    GaussianMlpEnsemble model, std::size_t obs_dim, std::size_t action_dim,
    OneDimModelConfig config)
    : model_(std::move(model)),
      obs_dim_(obs_dim),
      action_dim_(action_dim),
      config_(config),
      normalizer_(obs_dim + action_dim) {
  if (model_.in_size() != obs_dim_ + action_dim_) {
    throw std::invalid_argument(
        "OneDimTransitionRewardModel: model in_size " +
        std::to_string(model_.in_size()) + " != obs_dim + action_dim " +
        std::to_string(obs_dim_ + action_dim_));
  }
  if (model_.out_size() != target_dim()) {
    throw std::invalid_argument(
        "OneDimTransitionRewardModel: model out_size " +
        std::to_string(model_.out_size()) + " != target dim " +
        std::to_string(target_dim()));
  }
}

Matrix OneDimTransitionRewardModel::model_input(const Matrix& obs,
                                                const Matrix& action) const {
  if (static_cast<std::size_t>(obs.cols()) != obs_dim_ ||
      static_cast<std::size_t>(action.cols()) != action_dim_ ||
      obs.rows() != action.rows()) {
    throw std::invalid_argument("model_input: expected obs Bx" +
                                std::to_string(obs_dim_) + " and action Bx" +
                                std::to_string(action_dim_));
  }
  Matrix x(obs.rows(), obs.cols() + action.cols());
  x << obs, action;
  return config_.normalize ? normalizer_.normalize(x) : x;
}

std::pair<Matrix, Matrix> OneDimTransitionRewardModel::process_batch(
    const TransitionBatch& batch) const {
  batch.check_consistent();
  Matrix input = model_input(batch.obs, batch.action);
  Matrix target(batch.obs.rows(), static_cast<Eigen::Index>(target_dim()));
  const auto s = static_cast<Eigen::Index>(obs_dim_);
  target.leftCols(s) =
      config_.target_is_delta ? Matrix(batch.next_obs - batch.obs) : batch.next_obs;
  if (config_.learned_rewards) target.col(s) = batch.reward;
  return {std::move(input), std::move(target)};
}

void OneDimTransitionRewardModel::update_normalizer(const TransitionBatch& data) {
  if (!config_.normalize) return;
  Matrix x(data.obs.rows(), data.obs.cols() + data.action.cols());
  x << data.obs, data.action;
  normalizer_.fit(x);
}

std::vector<double> OneDimTransitionRewardModel::update(
    const EnsembleBatch& batch, nn::Adam& optimizer) {
  if (batch.size() != model_.ensemble_size()) {
    throw std::invalid_argument("update: batch ensemble axis " +
                                std::to_string(batch.size()) + " != " +
                                std::to_string(model_.ensemble_size()));
  }
  std::vector<Matrix> inputs, targets;
  for (const auto& b : batch) {
    auto [x, y] = process_batch(b);
    inputs.push_back(std::move(x));
    targets.push_back(std::move(y));
  }
  return model_.update(inputs, targets, optimizer);
}

std::vector<double> OneDimTransitionRewardModel::loss(
    const EnsembleBatch& batch) const {
  std::vector<Matrix> inputs, targets;
  for (const auto& b : batch) {
    auto [x, y] = process_batch(b);
    inputs.push_back(std::move(x));
    targets.push_back(std::move(y));
  }
  return model_.loss(inputs, targets);
}

Matrix OneDimTransitionRewardModel::eval_score(
    const TransitionBatch& batch) const {
  auto [x, y] = process_batch(batch);
  return model_.eval_score(x, y);
}

ModelSample OneDimTransitionRewardModel::sample(
    const Matrix& obs, const Matrix& action,
    std::span<const std::size_t> members, bool sample, Rng& rng) const {
  const Matrix x = model_input(obs, action);
  const auto p = x.rows();
  const auto t = static_cast<Eigen::Index>(target_dim());
  ModelSample out;
  out.model_mean.resize(p, t);
  if (!model_.deterministic()) out.model_logvar.resize(p, t);

  if (config_.propagation == Propagation::kEnsembleMean) {
    out.model_mean = model_.mean_predict(x);
    if (!model_.deterministic()) {
      out.model_logvar.setZero();
      for (std::size_t e : model_.elites()) {
        out.model_logvar += model_.forward_member(e, x).logvar;
      }
      out.model_logvar /= static_cast<double>(model_.elites().size());
    }
  } else {
    if (members.size() != static_cast<std::size_t>(p)) {
      throw std::invalid_argument("sample: need one member per particle");
    }
    // Group particles by member so each network runs once.
    std::vector<std::vector<Eigen::Index>> rows(model_.ensemble_size());
    for (Eigen::Index i = 0; i < p; ++i) {
      const std::size_t m = members[static_cast<std::size_t>(i)];
      if (m >= rows.size()) throw std::out_of_range("sample: member index");
      rows[m].push_back(i);
    }
    for (std::size_t m = 0; m < rows.size(); ++m) {
      if (rows[m].empty()) continue;
      const MemberOutput o = model_.forward_member(m, x(rows[m], Eigen::all));
      out.model_mean(rows[m], Eigen::all) = o.mean;
      if (!model_.deterministic()) out.model_logvar(rows[m], Eigen::all) = o.logvar;
    }
  }

  Matrix pred = out.model_mean;
  if (sample && !model_.deterministic()) {
    std::normal_distribution<double> normal(0.0, 1.0);
    for (Eigen::Index r = 0; r < p; ++r) {
      for (Eigen::Index c = 0; c < t; ++c) {
        pred(r, c) += std::exp(0.5 * out.model_logvar(r, c)) * normal(rng);
      }
    }
  }
  const auto s = static_cast<Eigen::Index>(obs_dim_);
  out.next_obs = pred.leftCols(s);
  if (config_.target_is_delta) out.next_obs += obs;
  if (config_.learned_rewards) out.reward = pred.col(s);
  return out;
}

void OneDimTransitionRewardModel::save(const std::filesystem::path& path) const {
  nn::Checkpoint ckpt;
  ckpt.meta["wrapper.obs_dim"] = std::to_string(obs_dim_);
  ckpt.meta["wrapper.action_dim"] = std::to_string(action_dim_);
  ckpt.meta["wrapper.target_is_delta"] = config_.target_is_delta ? "1" : "0";
  ckpt.meta["wrapper.learned_rewards"] = config_.learned_rewards ? "1" : "0";
  ckpt.meta["wrapper.normalize"] = config_.normalize ? "1" : "0";
  ckpt.meta["wrapper.propagation"] = PropagationName(config_.propagation);
  ckpt.meta["wrapper.normalizer_count"] = std::to_string(normalizer_.count());
  ckpt.add("wrapper.normalizer_mean", normalizer_.mean());
  ckpt.add("wrapper.normalizer_std", normalizer_.std());
  model_.save_to(ckpt);
  ckpt.save(path);
}

OneDimTransitionRewardModel OneDimTransitionRewardModel::load(
    const std::filesystem::path& path) {
  const nn::Checkpoint ckpt = nn::Checkpoint::load(path);
  OneDimModelConfig cfg;
  cfg.target_is_delta = ckpt.meta_at("wrapper.target_is_delta") == "1";
  cfg.learned_rewards = ckpt.meta_at("wrapper.learned_rewards") == "1";
  cfg.normalize = ckpt.meta_at("wrapper.normalize") == "1";
  cfg.propagation = ParsePropagation(ckpt.meta_at("wrapper.propagation"));
  OneDimTransitionRewardModel out(
      GaussianMlpEnsemble::load_from(ckpt),
      static_cast<std::size_t>(ParseInt(ckpt.meta_at("wrapper.obs_dim"))),
      static_cast<std::size_t>(ParseInt(ckpt.meta_at("wrapper.action_dim"))),
      cfg);
  out.normalizer_.set_stats(
      ckpt.get("wrapper.normalizer_mean").reshaped(),
      ckpt.get("wrapper.normalizer_std").reshaped(),
      static_cast<std::size_t>(ParseInt(ckpt.meta_at("wrapper.normalizer_count"))));
  return out;
}

}  // namespace mbrl::models
