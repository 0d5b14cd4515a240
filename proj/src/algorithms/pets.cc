#include "mbrl/algorithms/pets.h"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "mbrl/algorithms/rollout.h"
#include "mbrl/core/number_format.h"
#include "mbrl/envs/registry.h"
#include "mbrl/models/model_env.h"
#include "mbrl/models/trainer.h"

namespace mbrl::algorithms {
namespace {

// Seed streams derived from PetsConfig::seed.
enum Stream : uint64_t {
  kEnvStream = 1,
  kExplorationStream,
  kModelInitStream,
  kTrainStream,
  kAgentStream,
};

void WriteTimings(const std::vector<TrialRecord>& curve,
                  const std::filesystem::path& path) {
  std::ofstream out(path);
  out << "trial,wall_seconds\n";
  for (const auto& r : curve) {
    out << r.trial << ',' << FormatDouble(r.wall_seconds) << '\n';
  }
}

}  // namespace

void PetsConfig::validate() const {
  if (trial_length == 0) throw std::invalid_argument("overrides.trial_length must be >= 1");
  if (model_retrain_interval == 0) {
    throw std::invalid_argument("algorithm.model_retrain_interval must be >= 1");
  }
  if (model.ensemble_size == 0) {
    throw std::invalid_argument("dynamics_model.model.ensemble_size must be >= 1");
  }
  if (model.num_elites > model.ensemble_size) {
    throw std::invalid_argument("dynamics_model.model.num_elites must be <= ensemble_size");
  }
  if (agent.horizon == 0 || agent.horizon > trial_length) {
    throw std::invalid_argument("agent.planning_horizon must be in [1, trial_length]");
  }
  if (particles == 0) throw std::invalid_argument("agent.particles must be >= 1");
  if (training.batch_size == 0) {
    throw std::invalid_argument("overrides.model_batch_size must be >= 1");
  }
  if (!(training.validation_ratio >= 0.0 && training.validation_ratio < 1.0)) {
    throw std::invalid_argument("overrides.validation_ratio must be in [0, 1)");
  }
}

PetsResult RunPets(const PetsConfig& config,
                   const std::optional<std::filesystem::path>& out_dir,
                   const TrialCallback& on_trial) {
  config.validate();
  const auto wall_start = std::chrono::steady_clock::now();
  auto env = envs::MakeEnv(config.env, config.trial_length);
  const envs::EnvSpec& spec = env->spec();
  const auto term_fn = envs::LookupTermination(
      config.term_fn.empty() ? envs::DefaultTerminationFor(config.env)
                             : config.term_fn);
  models::RewardFn reward_fn;
  if (!config.wrapper.learned_rewards) {
    reward_fn = envs::LookupReward(config.reward_fn.empty()
                                       ? envs::DefaultRewardFor(config.env)
                                       : config.reward_fn);
  }

  const std::size_t capacity =
      config.buffer_capacity != 0
          ? config.buffer_capacity
          : std::max<std::size_t>({config.trial_length * config.num_trials,
                                   config.initial_exploration_steps, 1});
  ReplayBuffer buffer(capacity, spec.obs_dim, spec.action_dim);

  Rng env_rng(MixSeed(config.seed, kEnvStream));
  PetsResult result;
  {
    planning::RandomAgent explorer(spec.action_low, spec.action_high,
                                   MixSeed(config.seed, kExplorationStream));
    result.exploration_steps =
        RolloutAgentTrajectories(*env, config.initial_exploration_steps,
                                 explorer, &buffer, env_rng)
            .steps;
  }

  models::GaussianMlpConfig model_cfg = config.model;
  model_cfg.in_size = spec.obs_dim + spec.action_dim;
  model_cfg.out_size = spec.obs_dim + (config.wrapper.learned_rewards ? 1 : 0);
  Rng init_rng(MixSeed(config.seed, kModelInitStream));
  auto model = std::make_shared<models::OneDimTransitionRewardModel>(
      models::GaussianMlpEnsemble(model_cfg, init_rng), spec.obs_dim,
      spec.action_dim, config.wrapper);
  models::ModelTrainer trainer(*model, config.optim);
  Rng train_rng(MixSeed(config.seed, kTrainStream));

  auto model_env = std::make_shared<const models::ModelEnv>(model, term_fn, reward_fn);
  planning::TrajectoryEvalSpec eval_spec{config.agent.horizon, config.particles,
                                         !config.model.deterministic};
  auto agent = planning::MakeModelMpcAgent(model_env, config.agent, eval_spec,
                                           spec.action_low, spec.action_high,
                                           MixSeed(config.seed, kAgentStream));

  if (out_dir) std::filesystem::create_directories(*out_dir);
  std::size_t env_steps = result.exploration_steps;
  std::size_t trial_steps_total = 0;
  models::TrainerReport last_report;

  auto fail = [&](const std::string& msg) {
    result.diverged = true;
    result.message = msg;
    if (out_dir) {
      std::ofstream(*out_dir / "diagnostic.txt") << msg << '\n';
      std::ofstream(*out_dir / "trainer_report.json") << last_report.to_json() << '\n';
      buffer.save(*out_dir / "buffer.dat");
      WriteLearningCurve(result.curve, *out_dir / "results.csv");
    }
  };

  for (std::size_t trial = 0; trial < config.num_trials; ++trial) {
    Vector obs = env->reset(env_rng);
    agent->reset();
    double episode_return = 0.0;
    std::size_t epochs = 0;
    for (std::size_t step = 0; step < config.trial_length; ++step) {
      const bool at_start = step == 0;
      const bool at_interval = trial_steps_total % config.model_retrain_interval == 0;
      if (at_start || at_interval) {
        last_report = TrainModelOnBuffer(*model, trainer, buffer, config.training,
                                         train_rng);
        result.train_events.push_back(
            TrainEvent{trial_steps_total, at_start, at_interval, last_report.epochs_run});
        epochs += last_report.epochs_run;
        if (last_report.diverged) {
          fail("model training diverged at trial " + std::to_string(trial) +
               ": " + last_report.message);
          result.final_buffer_size = buffer.size();
          return result;
        }
      }
      const Vector action = agent->act(obs);
      const envs::EnvStep s = env->step(action);
      buffer.add(Transition{obs, action, s.obs, s.reward, s.done});
      episode_return += s.reward;
      obs = s.obs;
      ++env_steps;
      ++trial_steps_total;
      if (s.done) break;
    }
    TrialRecord rec;
    rec.trial = trial;
    rec.env_steps = env_steps;
    rec.episode_return = episode_return;
    rec.train_epochs = epochs;
    rec.sim_seconds = static_cast<double>(env_steps) * spec.dt;
    rec.wall_seconds = std::chrono::duration<double>(
                           std::chrono::steady_clock::now() - wall_start)
                           .count();
    result.curve.push_back(rec);
    if (out_dir) {
      WriteLearningCurve(result.curve, *out_dir / "results.csv");
      WriteTimings(result.curve, *out_dir / "timings.csv");
      model->save(*out_dir / "model.ckpt");
      buffer.save(*out_dir / "buffer.dat");
      std::ofstream(*out_dir / "trainer_report.json") << last_report.to_json() << '\n';
    }
    if (on_trial) on_trial(rec, *model, buffer);
  }
  if (out_dir && config.num_trials == 0) {
    WriteLearningCurve(result.curve, *out_dir / "results.csv");
    buffer.save(*out_dir / "buffer.dat");
  }
  result.final_buffer_size = buffer.size();
  return result;
}

void WriteLearningCurve(const std::vector<TrialRecord>& curve,
                        const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "trial,env_steps,episode_return,train_epochs,seconds\n";
  for (const auto& r : curve) {
    out << r.trial << ',' << r.env_steps << ',' << FormatDouble(r.episode_return)
        << ',' << r.train_epochs << ',' << FormatDouble(r.sim_seconds) << '\n';
  }
}

std::vector<TrialRecord> ReadLearningCurve(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  std::getline(in, line);
  if (line != "trial,env_steps,episode_return,train_epochs,seconds") {
    throw std::runtime_error(path.string() + ": unexpected header");
  }
  std::vector<TrialRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 5) throw std::runtime_error(path.string() + ": bad row");
    TrialRecord r;
    r.trial = static_cast<std::size_t>(ParseInt(f[0]));
    r.env_steps = static_cast<std::size_t>(ParseInt(f[1]));
    r.episode_return = ParseDouble(f[2]);
    r.train_epochs = static_cast<std::size_t>(ParseInt(f[3]));
    r.sim_seconds = ParseDouble(f[4]);
    out.push_back(r);
  }
  return out;
}

}  // namespace mbrl::algorithms
