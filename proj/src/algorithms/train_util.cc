#include "mbrl/algorithms/train_util.h"

#include <fstream>
#include <stdexcept>

#include "mbrl/core/iterators.h"

namespace mbrl::algorithms {

models::TrainerReport TrainModelOnBuffer(
    models::OneDimTransitionRewardModel& model, models::ModelTrainer& trainer,
    const ReplayBuffer& buffer, const ModelTrainingConfig& config, Rng& rng,
    const std::optional<std::filesystem::path>& save_dir) {
  if (buffer.empty()) throw std::invalid_argument("TrainModelOnBuffer: empty buffer");
  SplitIterators split = TrainValSplitIterators(
      buffer, config.validation_ratio, config.batch_size,
      config.shuffle_each_epoch, rng);
  model.update_normalizer(*split.data);

  models::TrainOptions options{config.num_epochs, config.patience,
                               config.improvement_threshold};
  TransitionIterator* val = split.validation ? &*split.validation : nullptr;
  models::TrainerReport report;
  if (config.bootstrap) {
    BootstrapIterator boot(split.data, split.train.indices(),
                           model.ensemble().ensemble_size(), config.batch_size,
                           config.shuffle_each_epoch, rng());
    report = trainer.train(boot, val, options);
  } else {
    report = trainer.train(split.train, val, options);
  }

  if (save_dir) {
    std::filesystem::create_directories(*save_dir);
    model.save(*save_dir / "model.ckpt");
    buffer.save(*save_dir / "buffer.dat");
    std::ofstream(*save_dir / "trainer_report.json") << report.to_json() << '\n';
  }
  return report;
}

}  // namespace mbrl::algorithms
