#include "mbrl/models/trainer.h"

#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include <nlohmann/json.hpp>

namespace mbrl::models {

std::string TrainerReport::to_json() const {
  nlohmann::json j;
  j["train_losses"] = train_losses;
  j["member_scores"] = member_scores;
  j["elite_scores"] = elite_scores;
  j["snapshot_epochs"] = snapshot_epochs;
  j["best_epoch"] = best_epoch;
  j["best_score"] = best_score;
  j["elites"] = elites;
  j["epochs_run"] = epochs_run;
  j["used_validation"] = used_validation;
  j["diverged"] = diverged;
  j["message"] = message;
  return j.dump(2);
}

ModelTrainer::ModelTrainer(OneDimTransitionRewardModel& model,
                           const nn::AdamConfig& optim)
    : model_(model), optimizer_(model.ensemble().make_optimizer(optim)) {}

TrainerReport ModelTrainer::train(BootstrapIterator& train_iter,
                                  TransitionIterator* validation,
                                  const TrainOptions& options) {
  if (train_iter.ensemble_size() != model_.ensemble().ensemble_size()) {
    throw std::invalid_argument("ModelTrainer: iterator ensemble size " +
                                std::to_string(train_iter.ensemble_size()) +
                                " != model ensemble size");
  }
  auto epoch = [&]() {
    double total = 0.0;
    std::size_t batches = 0;
    train_iter.for_each_batch([&](const EnsembleBatch& batch) {
      const auto losses = model_.update(batch, optimizer_);
      total += std::accumulate(losses.begin(), losses.end(), 0.0) /
               static_cast<double>(losses.size());
      ++batches;
    });
    return total / static_cast<double>(batches);
  };
  const bool use_val = validation != nullptr && validation->size() > 0;
  return run(epoch, use_val ? validation->all() : train_iter.all(), use_val,
             options);
}

TrainerReport ModelTrainer::train(TransitionIterator& train_iter,
                                  TransitionIterator* validation,
                                  const TrainOptions& options) {
  if (train_iter.size() == 0) {
    throw std::invalid_argument("ModelTrainer: empty training iterator");
  }
  const std::size_t e = model_.ensemble().ensemble_size();
  auto epoch = [&]() {
    double total = 0.0;
    std::size_t batches = 0;
    train_iter.for_each_batch([&](const TransitionBatch& batch) {
      const auto losses = model_.update(EnsembleBatch(e, batch), optimizer_);
      total += std::accumulate(losses.begin(), losses.end(), 0.0) /
               static_cast<double>(losses.size());
      ++batches;
    });
    return total / static_cast<double>(batches);
  };
  const bool use_val = validation != nullptr && validation->size() > 0;
  return run(epoch, use_val ? validation->all() : train_iter.all(), use_val,
             options);
}

TrainerReport ModelTrainer::run(const EpochFn& epoch,
                                const TransitionBatch& score_rows,
                                bool used_validation,
                                const TrainOptions& options) {
  TrainerReport report;
  report.used_validation = used_validation;
  auto& ensemble = model_.ensemble();
  const std::size_t k = ensemble.target_num_elites();
  double best = std::numeric_limits<double>::infinity();
  std::optional<GaussianMlpEnsemble> best_weights;
  std::vector<std::size_t> best_elites = ensemble.elites();
  std::size_t since_improvement = 0;

  for (std::size_t ep = 1; ep <= options.num_epochs; ++ep) {
    double train_loss;
    try {
      train_loss = epoch();
    } catch (const nn::NonFiniteError& err) {
      report.diverged = true;
      report.message = std::string("epoch ") + std::to_string(ep) + ": " +
                       err.what();
      break;
    }
    report.train_losses.push_back(train_loss);
    report.epochs_run = ep;

    const Matrix scores = model_.eval_score(score_rows);
    std::vector<double> member(scores.rows());
    for (Eigen::Index m = 0; m < scores.rows(); ++m) {
      member[m] = scores.row(m).mean();
    }
    const auto elites = SelectElites(member, k);
    double elite_score = 0.0;
    for (std::size_t e : elites) elite_score += member[e];
    elite_score /= static_cast<double>(k);
    report.member_scores.push_back(member);
    report.elite_scores.push_back(elite_score);
    if (!std::isfinite(elite_score)) {
      report.diverged = true;
      report.message = "epoch " + std::to_string(ep) + ": non-finite score";
      break;
    }

    const bool improved =
        !std::isfinite(best) ||
        (best - elite_score) > options.improvement_threshold * std::abs(best);
    if (improved) {
      best = elite_score;
      best_weights = ensemble;
      best_elites = elites;
      report.best_epoch = static_cast<int>(ep);
      report.snapshot_epochs.push_back(static_cast<int>(ep));
      since_improvement = 0;
    } else if (options.patience > 0 &&
               ++since_improvement >= options.patience) {
      break;
    }
  }

  if (best_weights) ensemble = *std::move(best_weights);
  ensemble.set_elites(best_elites);
  report.elites = best_elites;
  report.best_score = std::isfinite(best) ? best : 0.0;
  return report;
}

}  // namespace mbrl::models
