#ifndef MBRL_ALGORITHMS_PETS_H_
#define MBRL_ALGORITHMS_PETS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mbrl/algorithms/train_util.h"
#include "mbrl/core/replay_buffer.h"
#include "mbrl/models/gaussian_mlp.h"
#include "mbrl/models/one_dim_model.h"
#include "mbrl/nn/adam.h"
#include "mbrl/planning/agent.h"
#include "mbrl/planning/trajectory_eval.h"

namespace mbrl::algorithms {

struct PetsConfig {
  std::string env = "cartpole_continuous";
  std::string term_fn;    // empty: environment default
  std::string reward_fn;  // empty: environment default (ignored if learned)
  std::size_t trial_length = 200;
  std::size_t num_trials = 20;
  std::size_t initial_exploration_steps = 200;
  std::size_t model_retrain_interval = 250;
  std::size_t buffer_capacity = 0;  // 0: trial_length * num_trials

  models::GaussianMlpConfig model;  // in/out sizes resolved from the env
  models::OneDimModelConfig wrapper;
  nn::AdamConfig optim{7.5e-4, 0.9, 0.999, 1e-8, 3e-5};
  ModelTrainingConfig training;

  planning::TrajectoryOptimizerConfig agent;
  std::size_t particles = 20;

  uint64_t seed = 0;

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

struct TrialRecord {
  std::size_t trial = 0;
  std::size_t env_steps = 0;  // cumulative, including exploration
  double episode_return = 0.0;
  std::size_t train_epochs = 0;
  double sim_seconds = 0.0;   // cumulative simulated environment time
  double wall_seconds = 0.0;  // cumulative wall-clock time
};

struct TrainEvent {
  std::size_t trial_step = 0;  // env steps taken inside trials so far
  bool trial_start = false;
  bool interval = false;
  std::size_t epochs = 0;
};

struct PetsResult {
  std::vector<TrialRecord> curve;
  std::vector<TrainEvent> train_events;
  std::size_t exploration_steps = 0;
  std::size_t final_buffer_size = 0;
  bool diverged = false;
  std::string message;
};

// Optional observer invoked after each trial.
using TrialCallback = std::function<void(
    const TrialRecord&, const models::OneDimTransitionRewardModel&,
    const ReplayBuffer&)>;

// PETS: random exploration, then per trial alternate between retraining the
// ensemble on the whole buffer (at every trial start and every
// model_retrain_interval trial steps) and acting with a CEM MPC agent that
// plans over model particles. When `out_dir` is set, results.csv,
// timings.csv, model.ckpt, buffer.dat and trainer_report.json are written
// after every trial; a divergence writes diagnostic.txt and stops the run.
PetsResult RunPets(const PetsConfig& config,
                   const std::optional<std::filesystem::path>& out_dir = {},
                   const TrialCallback& on_trial = {});

// results.csv: trial,env_steps,episode_return,train_epochs,seconds with
// seconds = simulated environment time.
void WriteLearningCurve(const std::vector<TrialRecord>& curve,
                        const std::filesystem::path& path);
std::vector<TrialRecord> ReadLearningCurve(const std::filesystem::path& path);

}  // namespace mbrl::algorithms

#endif  // MBRL_ALGORITHMS_PETS_H_
