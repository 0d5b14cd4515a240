#include <algorithm>
#include <filesystem>
#include <fstream>
#include <memory>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "../../tools/cli.h"
#include "mbrl/algorithms/rollout.h"
#include "mbrl/core/number_format.h"
#include "mbrl/diagnostics/config.h"
#include "mbrl/diagnostics/csv.h"
#include "mbrl/diagnostics/dataset_evaluator.h"
#include "mbrl/diagnostics/true_env_control.h"
#include "mbrl/diagnostics/visualizer.h"
#include "mbrl/envs/registry.h"
#include "mbrl/models/trainer.h"

namespace mbrl::diagnostics {
namespace {

namespace fs = std::filesystem;

fs::path TempDir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("mbrl_diag_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

constexpr char kListingStyle[] = R"(
dynamics_model:
  model:
    _target_: mbrl.models.GaussianMLP
    device: "cpu"
    num_layers: 4
    in_size: "???"
    out_size: "???"
    ensemble_size: 5
    hid_size: 200
    use_silu: true
    deterministic: false
    propagation_method: "fixed_model"
algorithm:
  initial_exploration_steps: 5000
  learned_rewards: false
  target_is_delta: true
  normalize: True
overrides:
  env: "pendulum"
  trial_length: 1000
  num_trials: 125
  model_batch_size: 256
  validation_ratio: 0.05
)";

TEST(ConfigTest, ParsesListingLayout) {
  RunConfig cfg = ParseRunConfig(kListingStyle);
  EXPECT_FALSE(cfg.resolved());
  EXPECT_EQ(cfg.pets.model.num_layers, 4u);
  EXPECT_EQ(cfg.pets.model.hid_size, 200u);
  EXPECT_FALSE(cfg.pets.model.deterministic);
  EXPECT_EQ(cfg.pets.initial_exploration_steps, 5000u);
  EXPECT_EQ(cfg.pets.trial_length, 1000u);
  EXPECT_EQ(cfg.pets.num_trials, 125u);
  EXPECT_EQ(cfg.pets.training.batch_size, 256u);
  EXPECT_DOUBLE_EQ(cfg.pets.training.validation_ratio, 0.05);
  EXPECT_EQ(cfg.pets.wrapper.propagation, models::Propagation::kFixedModel);
}

TEST(ConfigTest, SentinelResolutionForEveryEnv) {
  for (const std::string& name : envs::EnvNames()) {
    for (bool learned : {false, true}) {
      RunConfig cfg = ParseRunConfig(std::string(kListingStyle));
      cfg.pets.wrapper.learned_rewards = learned;
      const auto env = envs::MakeEnv(name);
      ResolveRunConfig(cfg, env->spec());
      ASSERT_TRUE(cfg.resolved());
      EXPECT_EQ(*cfg.in_size, env->spec().obs_dim + env->spec().action_dim);
      EXPECT_EQ(*cfg.out_size, env->spec().obs_dim + (learned ? 1 : 0));
      EXPECT_EQ(cfg.pets.model.in_size, *cfg.in_size);
    }
  }
}

TEST(ConfigTest, ExplicitSizeMismatch) {
  RunConfig cfg = ParseRunConfig("dynamics_model:\n  model:\n    in_size: 7\n");
  try {
    ResolveRunConfig(cfg, envs::MakeEnv("cartpole_continuous")->spec());
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.key_path(), "dynamics_model.model.in_size");
  }
}

TEST(ConfigTest, UnknownKeyNamesPath) {
  try {
    ParseRunConfig("overrides:\n  trial_lenght: 10\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.key_path(), "overrides.trial_lenght");
  }
}

TEST(ConfigTest, SentinelOnlyForSizes) {
  try {
    ParseRunConfig("overrides:\n  num_trials: \"???\"\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.key_path(), "overrides.num_trials");
  }
}

TEST(ConfigTest, BadValueAndConstraint) {
  EXPECT_THROW(ParseRunConfig("agent:\n  planning_horizon: abc\n"), ConfigError);
  try {
    ParseRunConfig("algorithm:\n  model_retrain_interval: 0\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.key_path(), "algorithm.model_retrain_interval");
  }
}

TEST(CsvTest, RoundTripBitExact) {
  CsvTable t{{"a", "b"}, Matrix(3, 2)};
  t.rows << 0.1, -1e-300, 1.0 / 3.0, 12345678.9, -0.0, 2.5e10;
  const fs::path dir = TempDir("csv");
  WriteCsv(t, dir / "t.csv");
  const CsvTable back = ReadCsv(dir / "t.csv");
  EXPECT_EQ(back.header, t.header);
  EXPECT_EQ(back.rows, t.rows);
}


// Deterministic single-member model trained briefly on random CartPole data.
models::OneDimTransitionRewardModel TrainedCartPoleModel(const ReplayBuffer& data,
                                                         std::size_t epochs) {
  models::GaussianMlpConfig cfg;
  cfg.in_size = 5;
  cfg.out_size = 4;
  cfg.ensemble_size = 2;
  cfg.num_layers = 2;
  cfg.hid_size = 32;
  cfg.deterministic = true;
  Rng rng(0);
  models::OneDimTransitionRewardModel model(models::GaussianMlpEnsemble(cfg, rng), 4, 1,
                                            models::OneDimModelConfig{});
  model.update_normalizer(data.all());
  nn::AdamConfig optim;
  optim.learning_rate = 3e-3;
  models::ModelTrainer trainer(model, optim);
  auto batch = std::make_shared<TransitionBatch>(data.all());
  std::vector<std::size_t> idx(data.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  BootstrapIterator it(batch, idx, 2, 32, true, 1);
  models::TrainOptions opts;
  opts.num_epochs = epochs;
  trainer.train(it, nullptr, opts);
  return model;
}

ReplayBuffer RandomCartPole(std::size_t n, uint64_t seed) {
  auto env = envs::MakeEnv("cartpole_continuous");
  planning::RandomAgent agent(env->spec().action_low, env->spec().action_high, seed);
  ReplayBuffer buffer(n, 4, 1);
  Rng rng(seed);
  algorithms::RolloutAgentTrajectories(*env, n, agent, &buffer, rng);
  return buffer;
}

TEST(DatasetEvaluatorTest, SummaryRecomputableFromEmittedPairs) {
  const ReplayBuffer data = RandomCartPole(300, 1);
  const auto model = TrainedCartPoleModel(data, 3);
  const EvaluationTable table = EvaluateDataset(model, data);
  ASSERT_EQ(table.dims.size(), 4u);
  const fs::path dir = TempDir("eval");
  WriteEvaluationTable(table, dir);
  const CsvTable summary = ReadCsv(dir / "eval_summary.csv");
  EXPECT_EQ(summary.header, (std::vector<std::string>{"dim", "count", "mse", "r2"}));
  for (Eigen::Index d = 0; d < 4; ++d) {
    const CsvTable pairs = ReadCsv(dir / ("eval_dim_" + std::to_string(d) + ".csv"));
    ASSERT_EQ(pairs.rows.rows(), 300);
    double sq = 0.0;
    for (Eigen::Index i = 0; i < pairs.rows.rows(); ++i) {
      const double e = pairs.rows(i, 0) - pairs.rows(i, 1);
      sq += e * e;
    }
    EXPECT_EQ(summary.rows(d, 1), 300.0);
    EXPECT_EQ(summary.rows(d, 2), sq / 300.0);
  }
  const EvaluationTable back = ReadEvaluationTable(dir);
  ASSERT_EQ(back.dims.size(), 4u);
  EXPECT_EQ(back.dims[2].predicted, table.dims[2].predicted);
  EXPECT_EQ(back.dims[2].mse, table.dims[2].mse);
}

TEST(DatasetEvaluatorTest, LinearFitHasHighR2) {
  // Linear dynamics with a tiny model trained to convergence.
  ReplayBuffer data(400, 2, 1);
  Rng rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 400; ++i) {
    Vector s(2), a(1), n(2);
    s << u(rng), u(rng);
    a << u(rng);
    n << s(0) + 0.1 * s(1), s(1) + 0.1 * (a(0) - s(0));
    data.add(Transition{s, a, n, 0.0, false});
  }
  models::GaussianMlpConfig cfg;
  cfg.in_size = 3;
  cfg.out_size = 2;
  cfg.num_layers = 1;
  cfg.hid_size = 16;
  cfg.deterministic = true;
  models::OneDimTransitionRewardModel model(models::GaussianMlpEnsemble(cfg, rng), 2, 1,
                                            models::OneDimModelConfig{});
  model.update_normalizer(data.all());
  nn::AdamConfig optim;
  optim.learning_rate = 3e-3;
  nn::Adam adam = model.ensemble().make_optimizer(optim);
  const EnsembleBatch batch{data.all()};
  for (int i = 0; i < 3000; ++i) model.update(batch, adam);
  const EvaluationTable table = EvaluateDataset(model, data);
  for (const auto& d : table.dims) EXPECT_GT(d.r2, 0.99);
}

TEST(DatasetEvaluatorTest, Errors) {
  const ReplayBuffer data = RandomCartPole(50, 2);
  const auto model = TrainedCartPoleModel(data, 1);
  EXPECT_THROW(EvaluateDataset(model, ReplayBuffer(5, 4, 1)), std::invalid_argument);
  ReplayBuffer wrong(5, 2, 1);
  wrong.add(Transition{Vector::Zero(2), Vector::Zero(1), Vector::Zero(2), 0.0, false});
  try {
    EvaluateDataset(model, wrong);
    FAIL();
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("obs 2"), std::string::npos);
    EXPECT_NE(msg.find("obs 4"), std::string::npos);
  }
}

TEST(SummarizeTest, HandValues) {
  DimensionEvaluation d;
  d.predicted = Eigen::Vector3d(1, 2, 3);
  d.target = Eigen::Vector3d(1, 2, 5);
  Summarize(d);
  EXPECT_DOUBLE_EQ(d.mse, 4.0 / 3.0);
  // ss_tot: mean 8/3, deviations (-5/3, -2/3, 7/3) -> 78/9.
  EXPECT_NEAR(d.r2, 1.0 - 4.0 / (78.0 / 9.0), 1e-15);
}

// next = s + W [s; a] + b, representable exactly by a linear model.
class LinearEnv : public envs::Env {
 public:
  LinearEnv() {
    spec_.name = "linear";
    spec_.obs_dim = 2;
    spec_.action_dim = 1;
    spec_.action_low = Vector::Constant(1, -1);
    spec_.action_high = Vector::Constant(1, 1);
    spec_.trial_length = 50;
    spec_.dt = 0.1;
    w_.resize(2, 3);
    w_ << 0.0, 0.125, 0.0, -0.0625, 0.0, 0.25;
    state_ = Vector::Zero(2);
  }
  const envs::EnvSpec& spec() const override { return spec_; }
  Vector reset(Rng&) override {
    state_ << 0.5, -0.25;
    return state_;
  }
  envs::EnvStep step(const Vector& a) override {
    Vector x(3);
    x << state_, a;
    const Matrix delta = x.transpose() * w_.transpose();
    state_ = state_ + delta.row(0).transpose();
    return envs::EnvStep{state_, -state_.squaredNorm(), false};
  }
  Vector state() const override { return state_; }
  void set_state(const Vector& s) override { state_ = s; }
  std::unique_ptr<envs::Env> clone() const override {
    return std::make_unique<LinearEnv>(*this);
  }
  const Matrix& weight() const { return w_; }

 private:
  envs::EnvSpec spec_;
  Matrix w_;
  Vector state_;
};

std::shared_ptr<const models::ModelEnv> PerfectModelEnv(const LinearEnv& env,
                                                        bool deterministic) {
  models::GaussianMlpConfig cfg;
  cfg.in_size = 3;
  cfg.out_size = 2;
  cfg.ensemble_size = 1;
  cfg.num_layers = 0;
  cfg.deterministic = deterministic;
  Rng rng(0);
  models::GaussianMlpEnsemble ens(cfg, rng);
  auto& layer = ens.member(0).layers()[0];
  layer.weight.topRows(2) = env.weight();
  layer.bias.setZero();
  if (!deterministic) {
    layer.weight.bottomRows(2).setZero();
    layer.bias.tail(2).setConstant(-2.0);
  }
  models::OneDimModelConfig wcfg;
  wcfg.normalize = false;
  auto model = std::make_shared<models::OneDimTransitionRewardModel>(std::move(ens), 2, 1, wcfg);
  return std::make_shared<models::ModelEnv>(
      model, envs::LookupTermination("no_termination"),
      [](const Matrix&, const Matrix& n) { return Vector(-n.rowwise().squaredNorm()); });
}

TEST(VisualizerTest, PerfectModelHasZeroError) {
  LinearEnv env;
  Rng rng(1);
  env.reset(rng);
  const auto menv = PerfectModelEnv(env, true);
  planning::RandomAgent agent(Vector::Constant(1, -1), Vector::Constant(1, 1), 4);
  const RolloutComparison cmp = CompareRollout(*menv, env, agent, 30, 3, rng);
  EXPECT_EQ(cmp.true_obs.rows(), 30);
  ASSERT_EQ(cmp.model_obs.size(), 3u);
  for (const auto& m : cmp.model_obs) {
    EXPECT_LT((m - cmp.true_obs).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_EQ(m, cmp.model_obs[0]);
  }
  const fs::path dir = TempDir("vis");
  WriteRolloutComparison(cmp, dir / "rollout.csv");
  const CsvTable t = ReadCsv(dir / "rollout.csv");
  EXPECT_EQ(t.header, (std::vector<std::string>{"t", "dim", "true", "sample_0", "sample_1",
                                                "sample_2"}));
  EXPECT_EQ(t.rows.rows(), 60);
  EXPECT_EQ((t.rows.col(1).array() == 0.0).count(), 30);
}

TEST(VisualizerTest, ProbabilisticSamplesDiffer) {
  LinearEnv env;
  Rng rng(2);
  env.reset(rng);
  const auto menv = PerfectModelEnv(env, false);
  planning::RandomAgent agent(Vector::Constant(1, -1), Vector::Constant(1, 1), 5);
  const RolloutComparison cmp = CompareRollout(*menv, env, agent, 10, 2, rng);
  EXPECT_NE(cmp.model_obs[0], cmp.model_obs[1]);
}

TEST(TrueEnvControlTest, ZeroEpisodes) {
  auto env = envs::MakeEnv("cartpole_continuous");
  planning::TrajectoryOptimizerConfig cfg;
  cfg.horizon = 5;
  const auto r = TrueEnvCemControl(*env, cfg, 0, 0);
  EXPECT_TRUE(r.returns.empty());
}

TEST(TrueEnvControlTest, SeedDeterministic) {
  auto env = envs::MakeEnv("cartpole_continuous", 40);
  planning::TrajectoryOptimizerConfig cfg;
  cfg.horizon = 10;
  cfg.cem.population = 30;
  cfg.cem.num_elites = 5;
  cfg.cem.num_iterations = 2;
  const auto a = TrueEnvCemControl(*env, cfg, 1, 7);
  const auto b = TrueEnvCemControl(*env, cfg, 1, 7);
  EXPECT_EQ(a.step_rewards, b.step_rewards);
  EXPECT_EQ(a.returns.size(), 1u);
}

TEST(TrueEnvControlTest, PendulumSwingUpFromHanging) {
  auto env = envs::MakeEnv("pendulum", 200);
  planning::TrajectoryOptimizerConfig cfg;
  cfg.horizon = 30;
  cfg.cem.population = 200;
  cfg.cem.num_elites = 20;
  cfg.cem.num_iterations = 5;
  Vector hanging(2);
  hanging << M_PI, 0.0;
  const auto r = TrueEnvCemControl(*env, cfg, 1, 0, hanging);
  const auto& rewards = r.step_rewards.at(0);
  ASSERT_EQ(rewards.size(), 200u);
  double cost = 0.0;
  for (std::size_t t = 150; t < 200; ++t) cost -= rewards[t];
  EXPECT_LT(cost / 50.0, 1.0);
}

// CLI ---------------------------------------------------------------------

int RunCli(const std::vector<std::string>& args, std::string* out_text = nullptr,
           std::string* err_text = nullptr) {
  std::ostringstream out, err;
  const int code = cli::Main(args, out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return code;
}

constexpr char kTinyTrain[] = R"(
dynamics_model:
  model:
    num_layers: 1
    in_size: "???"
    out_size: "???"
    ensemble_size: 2
    hid_size: 8
    deterministic: true
algorithm:
  initial_exploration_steps: 30
  model_retrain_interval: 25
overrides:
  env: cartpole_continuous
  trial_length: 20
  num_trials: 2
  num_epochs_train_model: 2
  model_batch_size: 16
agent:
  planning_horizon: 4
  particles: 2
optimizer:
  population_size: 16
  num_elites: 4
  num_iterations: 2
seed: 3
)";

fs::path WriteConfig(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "config.yaml";
  std::ofstream(p) << text;
  return p;
}

TEST(CliTest, UnknownSubcommand) {
  std::string err;
  EXPECT_EQ(RunCli({"bogus"}, nullptr, &err), 2);
  EXPECT_EQ(err.rfind("error: usage:", 0), 0u);
  EXPECT_NE(err.find("train"), std::string::npos);
}

TEST(CliTest, BadConfigKeyExitTwo) {
  const fs::path dir = TempDir("cli_bad");
  const fs::path cfg = WriteConfig(dir, "overrides:\n  nope: 1\n");
  std::string err;
  EXPECT_EQ(RunCli({"train", "--config", cfg.string(), "--out", (dir / "run").string()},
                   nullptr, &err),
            2);
  EXPECT_NE(err.find("overrides.nope"), std::string::npos);
  EXPECT_EQ(std::count(err.begin(), err.end(), '\n'), 1);
}

TEST(CliTest, MissingFileIsConfigError) {
  EXPECT_EQ(RunCli({"train", "--config", "/nonexistent/x.yaml"}), 2);
}

TEST(CliTest, RuntimeErrorExitOne) {
  const fs::path dir = TempDir("cli_rt");
  std::string err;
  EXPECT_EQ(RunCli({"eval-dataset", "--model", (dir / "missing.ckpt").string(), "--dataset",
                    (dir / "missing.dat").string(), "--out", dir.string()},
                   nullptr, &err),
            1);
  EXPECT_EQ(err.rfind("error: runtime:", 0), 0u);
}

TEST(CliTest, TrainTwiceIsByteIdenticalThenDiagnose) {
  const fs::path dir = TempDir("cli_train");
  const fs::path cfg = WriteConfig(dir, kTinyTrain);
  for (const char* run : {"a", "b"}) {
    ASSERT_EQ(RunCli({"train", "--config", cfg.string(), "--seed", "5", "--out",
                      (dir / run).string()}),
              0);
  }
  const std::string a = Slurp(dir / "a" / "results.csv");
  EXPECT_EQ(a, Slurp(dir / "b" / "results.csv"));
  EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 3);
  EXPECT_EQ(Slurp(dir / "a" / "seed.txt"), "5\n");
  EXPECT_EQ(Slurp(dir / "a" / "config.yaml"), kTinyTrain);

  ASSERT_EQ(RunCli({"eval-dataset", "--model", (dir / "a" / "model.ckpt").string(),
                    "--dataset", (dir / "a" / "buffer.dat").string(), "--out",
                    (dir / "eval").string()}),
            0);
  EXPECT_EQ(ReadEvaluationTable(dir / "eval").dims.size(), 4u);

  ASSERT_EQ(RunCli({"visualize", "--config", cfg.string(), "--model",
                    (dir / "a" / "model.ckpt").string(), "--horizon", "12", "--out",
                    (dir / "vis").string()}),
            0);
  const CsvTable vis = ReadCsv(dir / "vis" / "rollout.csv");
  EXPECT_EQ(vis.rows.rows(), 12 * 4);
}

TEST(CliTest, TrueEnvControlZeroEpisodes) {
  const fs::path dir = TempDir("cli_tec");
  const fs::path cfg = WriteConfig(dir, kTinyTrain);
  std::string out;
  EXPECT_EQ(RunCli({"true-env-control", "--config", cfg.string(), "--episodes", "0", "--out",
                    (dir / "tec").string()},
                   &out),
            0);
  EXPECT_TRUE(out.empty());
  EXPECT_EQ(ReadCsv(dir / "tec" / "true_env_control.csv").rows.rows(), 0);
}

}  // namespace
}  // namespace mbrl::diagnostics
