#ifndef MBRL_MODELS_TRAINER_H_
#define MBRL_MODELS_TRAINER_H_

#include <cstddef>
#include <string>
#include <vector>

#include "mbrl/core/iterators.h"
#include "mbrl/models/one_dim_model.h"
#include "mbrl/nn/adam.h"

namespace mbrl::models {

struct TrainerReport {
  std::vector<double> train_losses;               // mean member loss per epoch
  std::vector<std::vector<double>> member_scores;  // per epoch, per member
  std::vector<double> elite_scores;                // mean elite score per epoch
  std::vector<int> snapshot_epochs;                // epochs where best improved
  int best_epoch = 0;                              // 1-based; 0 if none
  double best_score = 0.0;
  std::vector<std::size_t> elites;
  std::size_t epochs_run = 0;
  bool used_validation = false;
  bool diverged = false;
  std::string message;

  std::string to_json() const;
};

struct TrainOptions {
  std::size_t num_epochs = 50;
  std::size_t patience = 0;  // 0 disables early stopping
  double improvement_threshold = 0.01;
};

// Supervised training loop with best-weights tracking and elite selection.
// The optimizer state persists across train() calls.
class ModelTrainer {
 public:
  ModelTrainer(OneDimTransitionRewardModel& model,
               const nn::AdamConfig& optim);

  // Scores members on `validation` when given, otherwise on the un-resampled
  // training rows. Weights from the best-scoring epoch are restored at the
  // end and elites are set from that epoch's scores.
  TrainerReport train(BootstrapIterator& train_iter,
                      TransitionIterator* validation,
                      const TrainOptions& options);

  // Plain (non-bootstrap) variant: every member sees the same batches.
  TrainerReport train(TransitionIterator& train_iter,
                      TransitionIterator* validation,
                      const TrainOptions& options);

  nn::Adam& optimizer() { return optimizer_; }

 private:
  using EpochFn = std::function<double()>;
  TrainerReport run(const EpochFn& epoch, const TransitionBatch& score_rows,
                    bool used_validation, const TrainOptions& options);

  OneDimTransitionRewardModel& model_;
  nn::Adam optimizer_;
};

}  // namespace mbrl::models

#endif  // MBRL_MODELS_TRAINER_H_
