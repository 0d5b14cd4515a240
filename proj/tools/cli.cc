#include "cli.h"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

#include <CLI11.hpp>

#include "mbrl/algorithms/pets.h"
#include "mbrl/core/replay_buffer.h"
#include "mbrl/diagnostics/config.h"
#include "mbrl/diagnostics/csv.h"
#include "mbrl/diagnostics/dataset_evaluator.h"
#include "mbrl/diagnostics/true_env_control.h"
#include "mbrl/diagnostics/visualizer.h"
#include "mbrl/envs/registry.h"
#include "mbrl/models/model_env.h"
#include "mbrl/models/one_dim_model.h"
#include "mbrl/planning/trajectory_eval.h"

namespace mbrl::cli {
namespace {

namespace fs = std::filesystem;

struct Options {
  std::string config;
  std::optional<uint64_t> seed;
  std::string out = "run";
  std::string model;
  std::string dataset;
  std::optional<std::size_t> horizon;
  std::optional<std::size_t> episodes;
};

diagnostics::RunConfig ResolvedConfig(const Options& opt,
                                      std::unique_ptr<envs::Env>* env_out = nullptr) {
  diagnostics::RunConfig cfg = diagnostics::LoadRunConfig(opt.config);
  if (opt.seed) cfg.pets.seed = *opt.seed;
  std::unique_ptr<envs::Env> env;
  try {
    env = envs::MakeEnv(cfg.pets.env, cfg.pets.trial_length);
  } catch (const std::invalid_argument& e) {
    throw diagnostics::ConfigError("overrides.env", e.what());
  }
  diagnostics::ResolveRunConfig(cfg, env->spec());
  if (env_out) *env_out = std::move(env);
  return cfg;
}

int Train(const Options& opt, std::ostream& out) {
  const diagnostics::RunConfig cfg = ResolvedConfig(opt);
  const fs::path dir(opt.out);
  fs::create_directories(dir);
  std::ofstream(dir / "config.yaml") << cfg.text;
  std::ofstream(dir / "seed.txt") << cfg.pets.seed << '\n';
  const auto result = algorithms::RunPets(cfg.pets, dir);
  if (result.diverged) throw std::runtime_error(result.message);
  for (const auto& r : result.curve) {
    out << "trial " << r.trial << " return " << r.episode_return << '\n';
  }
  return 0;
}

int EvalDataset(const Options& opt, std::ostream& out) {
  if (opt.model.empty() || opt.dataset.empty()) {
    throw diagnostics::ConfigError("--model/--dataset", "both are required");
  }
  const auto model = models::OneDimTransitionRewardModel::load(opt.model);
  const ReplayBuffer data = ReplayBuffer::load(opt.dataset);
  const auto table = diagnostics::EvaluateDataset(model, data);
  diagnostics::WriteEvaluationTable(table, opt.out);
  for (std::size_t d = 0; d < table.dims.size(); ++d) {
    out << "dim " << d << " mse " << table.dims[d].mse << " r2 " << table.dims[d].r2
        << '\n';
  }
  return 0;
}

int Visualize(const Options& opt, std::ostream& out) {
  if (opt.model.empty()) throw diagnostics::ConfigError("--model", "is required");
  std::unique_ptr<envs::Env> env;
  const diagnostics::RunConfig cfg = ResolvedConfig(opt, &env);
  const auto& p = cfg.pets;
  auto model = std::make_shared<const models::OneDimTransitionRewardModel>(
      models::OneDimTransitionRewardModel::load(opt.model));
  models::RewardFn reward_fn;
  if (!model->config().learned_rewards) {
    reward_fn = envs::LookupReward(p.reward_fn.empty() ? envs::DefaultRewardFor(p.env)
                                                       : p.reward_fn);
  }
  auto model_env = std::make_shared<const models::ModelEnv>(
      model,
      envs::LookupTermination(p.term_fn.empty() ? envs::DefaultTerminationFor(p.env)
                                                : p.term_fn),
      reward_fn);
  auto agent = planning::MakeModelMpcAgent(
      model_env, p.agent,
      planning::TrajectoryEvalSpec{p.agent.horizon, p.particles,
                                   !model->ensemble().deterministic()},
      env->spec().action_low, env->spec().action_high, MixSeed(p.seed, 7));
  Rng rng(p.seed);
  env->reset(rng);
  const std::size_t horizon = opt.horizon.value_or(30);
  const auto cmp = diagnostics::CompareRollout(*model_env, *env, *agent, horizon,
                                               cfg.visualize_samples, rng);
  fs::create_directories(opt.out);
  diagnostics::WriteRolloutComparison(cmp, fs::path(opt.out) / "rollout.csv");
  out << "wrote " << (fs::path(opt.out) / "rollout.csv").string() << '\n';
  return 0;
}

int TrueEnvControl(const Options& opt, std::ostream& out) {
  std::unique_ptr<envs::Env> env;
  diagnostics::RunConfig cfg = ResolvedConfig(opt, &env);
  auto agent_cfg = cfg.pets.agent;
  if (opt.horizon) agent_cfg.horizon = *opt.horizon;
  const std::size_t episodes = opt.episodes.value_or(cfg.eval_episodes);
  const auto result =
      diagnostics::TrueEnvCemControl(*env, agent_cfg, episodes, cfg.pets.seed);
  fs::create_directories(opt.out);
  diagnostics::CsvTable table{{"episode", "return"},
                              Matrix(static_cast<Eigen::Index>(episodes), 2)};
  for (std::size_t i = 0; i < episodes; ++i) {
    table.rows.row(static_cast<Eigen::Index>(i)) << static_cast<double>(i),
        result.returns[i];
    out << "episode " << i << " return " << result.returns[i] << '\n';
  }
  diagnostics::WriteCsv(table, fs::path(opt.out) / "true_env_control.csv");
  return 0;
}

}  // namespace

int Main(const std::vector<std::string>& args, std::ostream& out,
         std::ostream& err) {
  CLI::App app{"Model-based RL toolkit: PETS training and model diagnostics", "mbrl"};
  app.require_subcommand(1);
  Options opt;
  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* c = sub->add_option("--config", opt.config, "Run configuration (YAML)");
    if (needs_config) c->required();
    sub->add_option("--seed", opt.seed, "Overrides the configured seed");
    sub->add_option("--out", opt.out, "Output directory");
  };
  auto* train = app.add_subcommand("train", "Run PETS and write a run directory");
  add_common(train, true);
  auto* eval = app.add_subcommand("eval-dataset", "Evaluate a model on a saved dataset");
  add_common(eval, false);
  eval->add_option("--model", opt.model, "Model checkpoint")->required();
  eval->add_option("--dataset", opt.dataset, "Replay buffer file")->required();
  auto* vis = app.add_subcommand("visualize", "Compare model rollouts with the true env");
  add_common(vis, true);
  vis->add_option("--model", opt.model, "Model checkpoint")->required();
  vis->add_option("--horizon", opt.horizon, "Rollout length");
  auto* tec = app.add_subcommand("true-env-control", "CEM control on the true env");
  add_common(tec, true);
  tec->add_option("--horizon", opt.horizon, "Planning horizon");
  tec->add_option("--episodes", opt.episodes, "Number of episodes");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: usage: " << e.what() << '\n' << app.help();
    return 2;
  }

  try {
    if (train->parsed()) return Train(opt, out);
    if (eval->parsed()) return EvalDataset(opt, out);
    if (vis->parsed()) return Visualize(opt, out);
    if (tec->parsed()) return TrueEnvControl(opt, out);
  } catch (const diagnostics::ConfigError& e) {
    err << "error: config: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: runtime: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace mbrl::cli
