#ifndef MBRL_ALGORITHMS_TRAIN_UTIL_H_
#define MBRL_ALGORITHMS_TRAIN_UTIL_H_

#include <cstddef>
#include <filesystem>
#include <optional>

#include "mbrl/core/replay_buffer.h"
#include "mbrl/models/one_dim_model.h"
#include "mbrl/models/trainer.h"

namespace mbrl::algorithms {

struct ModelTrainingConfig {
  double validation_ratio = 0.0;
  std::size_t batch_size = 256;
  std::size_t num_epochs = 50;
  std::size_t patience = 5;
  double improvement_threshold = 0.01;
  bool bootstrap = true;
  bool shuffle_each_epoch = true;
};

// Refits the input normalizer on the whole buffer, draws a fresh train /
// validation split, trains (bootstrapped per member when enabled) and, when
// `save_dir` is given, writes model.ckpt, buffer.dat and trainer_report.json
// there. Without validation data elites are ranked by training MSE.
models::TrainerReport TrainModelOnBuffer(
    models::OneDimTransitionRewardModel& model, models::ModelTrainer& trainer,
    const ReplayBuffer& buffer, const ModelTrainingConfig& config, Rng& rng,
    const std::optional<std::filesystem::path>& save_dir = std::nullopt);

}  // namespace mbrl::algorithms

#endif  // MBRL_ALGORITHMS_TRAIN_UTIL_H_
