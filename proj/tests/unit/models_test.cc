#include <cmath>
#include <filesystem>
#include <limits>
#include <map>
#include <memory>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "mbrl/core/iterators.h"
#include "mbrl/models/gaussian_mlp.h"
#include "mbrl/models/losses.h"
#include "mbrl/models/model_env.h"
#include "mbrl/models/one_dim_model.h"
#include "mbrl/models/trainer.h"

namespace mbrl::models {
namespace {

GaussianMlpConfig SmallConfig(std::size_t in, std::size_t out, std::size_t e,
                              bool deterministic) {
  GaussianMlpConfig cfg;
  cfg.in_size = in;
  cfg.out_size = out;
  cfg.ensemble_size = e;
  cfg.num_layers = 2;
  cfg.hid_size = 16;
  cfg.deterministic = deterministic;
  return cfg;
}

// next_obs = obs + 0.1 * (A obs + b a): a linear system with S=2, A=1.
std::shared_ptr<TransitionBatch> LinearData(std::size_t n, uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto data = std::make_shared<TransitionBatch>(n, 2, 1);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    const double x0 = u(rng), x1 = u(rng), a = u(rng);
    data->obs(r, 0) = x0;
    data->obs(r, 1) = x1;
    data->action(r, 0) = a;
    data->next_obs(r, 0) = x0 + 0.1 * (0.5 * x0 - 0.3 * x1);
    data->next_obs(r, 1) = x1 + 0.1 * (0.2 * x0 + 0.4 * x1 + a);
    data->reward(r) = x0 - a;
    data->done(r) = false;
  }
  return data;
}

std::vector<std::size_t> Iota(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), std::size_t{0});
  return v;
}

TEST(LossTest, MseExamples) {
  Matrix a = Matrix::Random(3, 2);
  EXPECT_EQ(MseLoss(a, a), 0.0);
  Matrix p = Matrix::Zero(1, 2), t(1, 2);
  t << 3, 4;
  EXPECT_EQ(MseLoss(p, t), 25.0);
  Matrix p2 = Matrix::Zero(2, 2), t2(2, 2);
  t2 << 1, 0, 1, std::sqrt(2.0);
  EXPECT_NEAR(MseLoss(p2, t2), 4.0, 1e-15);
  EXPECT_THROW(MseLoss(p, p2), std::invalid_argument);
}

TEST(LossTest, NllExamples) {
  Matrix m(1, 1), lv(1, 1), t(1, 1);
  m << 0;
  lv << 0;
  t << 0;
  EXPECT_EQ(GaussianNllLoss(m, lv, t), 0.0);
  t << 1;
  EXPECT_EQ(GaussianNllLoss(m, lv, t), 1.0);
  t << 0;
  lv << 2;
  EXPECT_EQ(GaussianNllLoss(m, lv, t), 2.0);
  lv << std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(GaussianNllLoss(m, lv, t), std::invalid_argument);
}

TEST(LossTest, NllMatchesDirectMatrixForm) {
  // Independent evaluation: build the diagonal covariance explicitly and use
  // a linear solve and a log-determinant.
  Rng rng(17);
  std::normal_distribution<double> normal;
  std::uniform_int_distribution<int> dim(1, 4);
  for (int trial = 0; trial < 1000; ++trial) {
    const int d = dim(rng);
    Matrix mu(1, d), lv(1, d), s(1, d);
    for (int j = 0; j < d; ++j) {
      mu(0, j) = normal(rng);
      lv(0, j) = 2.0 * normal(rng);
      s(0, j) = normal(rng);
    }
    Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(d, d);
    for (int j = 0; j < d; ++j) sigma(j, j) = std::exp(lv(0, j));
    const Eigen::VectorXd r = (mu - s).transpose();
    const double quad = r.dot(sigma.ldlt().solve(r));
    const double logdet = std::log(sigma.determinant());
    const double expected = quad + logdet;
    const double got = GaussianNllLoss(mu, lv, s);
    ASSERT_LE(std::abs(got - expected), 1e-9 * std::max(1.0, std::abs(expected)));
  }
}

TEST(EnsembleTest, BroadcastForward) {
  Rng rng(0);
  GaussianMlpEnsemble ens(SmallConfig(3, 2, 5, false), rng);
  const auto out = ens.forward(Matrix::Random(4, 3));
  ASSERT_EQ(out.size(), 5u);
  for (const auto& o : out) {
    EXPECT_EQ(o.mean.rows(), 4);
    EXPECT_EQ(o.mean.cols(), 2);
    EXPECT_EQ(o.logvar.cols(), 2);
  }
}

TEST(EnsembleTest, DeterministicHasNoLogvar) {
  Rng rng(0);
  GaussianMlpEnsemble ens(SmallConfig(3, 2, 2, true), rng);
  EXPECT_EQ(ens.forward_member(0, Matrix::Random(4, 3)).logvar.size(), 0);
}

TEST(EnsembleTest, LogvarSoftBoundSaturates) {
  Rng rng(0);
  GaussianMlpEnsemble ens(SmallConfig(3, 2, 1, false), rng);
  auto& last = ens.member(0).layers().back();
  last.weight.setZero();
  last.bias.tail(2).setConstant(1e6);
  const Matrix lv = ens.forward_member(0, Matrix::Random(3, 3)).logvar;
  EXPECT_LE(lv.maxCoeff(), ens.max_logvar(0).maxCoeff() + 1e-3);
  last.bias.tail(2).setConstant(-1e6);
  const Matrix lv2 = ens.forward_member(0, Matrix::Random(3, 3)).logvar;
  EXPECT_GE(lv2.minCoeff(), ens.min_logvar(0).minCoeff() - 1e-3);
}

TEST(EnsembleTest, MeanOfTwoMembers) {
  Rng rng(0);
  GaussianMlpEnsemble ens(SmallConfig(1, 1, 2, true), rng);
  for (std::size_t e = 0; e < 2; ++e) {
    for (auto& l : ens.member(e).layers()) l.weight.setZero();
    ens.member(e).layers().back().bias(0) = e == 0 ? 1.0 : 3.0;
  }
  EXPECT_EQ(ens.mean_predict(Matrix::Zero(1, 1))(0, 0), 2.0);
}

TEST(EnsembleTest, SingleMemberMean) {
  Rng rng(3);
  GaussianMlpEnsemble ens(SmallConfig(3, 2, 1, false), rng);
  const Matrix x = Matrix::Random(5, 3);
  EXPECT_EQ(ens.mean_predict(x), ens.forward_member(0, x).mean);
}

TEST(EnsembleTest, EliteMeanMatchesManualAverage) {
  Rng rng(4);
  GaussianMlpEnsemble ens(SmallConfig(3, 2, 7, false), rng);
  ens.set_elites({0, 2, 4, 6, 1});
  const Matrix x = Matrix::Random(6, 3);
  Matrix manual = Matrix::Zero(6, 2);
  for (std::size_t e : {0, 2, 4, 6, 1}) manual += ens.forward_member(e, x).mean;
  manual /= 5.0;
  EXPECT_EQ(ens.num_elites(), 5u);
  EXPECT_LT((ens.mean_predict(x) - manual).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(EnsembleTest, PermutationSymmetry) {
  Rng rng(5);
  GaussianMlpEnsemble ens(SmallConfig(3, 2, 4, false), rng);
  GaussianMlpEnsemble perm = ens;
  const std::vector<std::size_t> order{2, 0, 3, 1};
  for (std::size_t e = 0; e < 4; ++e) {
    perm.member(e) = ens.member(order[e]);
    perm.set_logvar_bounds(e, ens.min_logvar(order[e]), ens.max_logvar(order[e]));
  }
  const Matrix x = Matrix::Random(5, 3);
  const auto a = ens.forward(x);
  const auto b = perm.forward(x);
  for (std::size_t e = 0; e < 4; ++e) {
    EXPECT_EQ(b[e].mean, a[order[e]].mean);
    EXPECT_EQ(b[e].logvar, a[order[e]].logvar);
  }
  EXPECT_LT((ens.mean_predict(x) - perm.mean_predict(x)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(EnsembleTest, SelectElitesRanking) {
  const std::vector<double> scores{0.3, 0.1, 0.2};
  EXPECT_EQ(SelectElites(scores, 2), (std::vector<std::size_t>{1, 2}));
  const std::vector<double> ties{0.5, 0.5, 0.1};
  EXPECT_EQ(SelectElites(ties, 2), (std::vector<std::size_t>{0, 2}));
}

TEST(EnsembleTest, EvalScoreBiasVarianceIdentity) {
  Rng rng(6);
  GaussianMlpEnsemble ens(SmallConfig(1, 1, 1, true), rng);
  for (auto& l : ens.member(0).layers()) l.weight.setZero();
  const double c = 0.7;
  ens.member(0).layers().back().bias(0) = c;
  std::normal_distribution<double> normal(0.2, 1.5);
  Matrix target(500, 1);
  for (int i = 0; i < 500; ++i) target(i, 0) = normal(rng);
  const double mean = target.mean();
  const double var = (target.array() - mean).square().mean();
  const Matrix score = ens.eval_score(Matrix::Zero(500, 1), target);
  EXPECT_NEAR(score(0, 0), var + (c - mean) * (c - mean), 1e-12);
  EXPECT_EQ(ens.eval_score(Matrix::Zero(500, 1), Matrix::Constant(500, 1, c))(0, 0), 0.0);
}

TEST(EnsembleTest, IdenticalMembersStayIdentical) {
  Rng rng(7);
  GaussianMlpEnsemble ens(SmallConfig(3, 2, 2, false), rng);
  ens.member(1) = ens.member(0);
  ens.set_logvar_bounds(1, ens.min_logvar(0), ens.max_logvar(0));
  nn::Adam opt = ens.make_optimizer(nn::AdamConfig{});
  const Matrix x = Matrix::Random(8, 3);
  const Matrix y = Matrix::Random(8, 2);
  const std::vector<Matrix> xs{x, x}, ys{y, y};
  for (int i = 0; i < 5; ++i) ens.update(xs, ys, opt);
  for (std::size_t l = 0; l < ens.member(0).layers().size(); ++l) {
    EXPECT_EQ(ens.member(0).layers()[l].weight, ens.member(1).layers()[l].weight);
  }
  EXPECT_EQ(ens.min_logvar(0), ens.min_logvar(1));
}

TEST(EnsembleTest, MemberSeesOnlyOwnRows) {
  Rng rng(8);
  GaussianMlpEnsemble ens(SmallConfig(3, 2, 2, true), rng);
  GaussianMlpEnsemble ref = ens;
  nn::Adam opt = ens.make_optimizer(nn::AdamConfig{});
  const Matrix x = Matrix::Random(8, 3);
  const std::vector<Matrix> xs{x, x};
  const std::vector<Matrix> ys{Matrix::Random(8, 2), Matrix::Random(8, 2)};
  ens.update(xs, ys, opt);
  // Changing member 1's targets must not change member 0's update.
  nn::Adam opt2 = ref.make_optimizer(nn::AdamConfig{});
  const std::vector<Matrix> ys2{ys[0], Matrix::Random(8, 2)};
  ref.update(xs, ys2, opt2);
  EXPECT_EQ(ens.member(0).layers()[0].weight, ref.member(0).layers()[0].weight);
  EXPECT_NE(ens.member(1).layers()[0].weight, ref.member(1).layers()[0].weight);
}

TEST(EnsembleTest, NllDecreasesOnLinearData) {
  const auto data = LinearData(100, 1);
  Rng rng(9);
  OneDimTransitionRewardModel model(GaussianMlpEnsemble(SmallConfig(3, 2, 1, false), rng),
                                    2, 1, OneDimModelConfig{});
  model.update_normalizer(*data);
  nn::AdamConfig cfg;
  cfg.learning_rate = 1e-3;
  nn::Adam opt = model.ensemble().make_optimizer(cfg);
  const EnsembleBatch batch{*data};
  const double first = model.loss(batch)[0];
  double last = first;
  for (int i = 0; i < 500; ++i) last = model.update(batch, opt)[0];
  last = model.loss(batch)[0];
  // NLL is unbounded below; compare the decrease relative to the start.
  EXPECT_LT(last, first - 0.5 * std::abs(first));
}

TEST(EnsembleTest, DeterministicFitsLinearSystem) {
  const auto data = LinearData(200, 2);
  Rng rng(10);
  OneDimTransitionRewardModel model(GaussianMlpEnsemble(SmallConfig(3, 2, 1, true), rng),
                                    2, 1, OneDimModelConfig{});
  model.update_normalizer(*data);
  nn::AdamConfig cfg;
  cfg.learning_rate = 3e-3;
  nn::Adam opt = model.ensemble().make_optimizer(cfg);
  const EnsembleBatch batch{*data};
  for (int i = 0; i < 2000; ++i) model.update(batch, opt);
  EXPECT_LT(model.eval_score(*data).mean(), 1e-4);
}

TEST(EnsembleTest, NonFiniteUpdateLeavesParameters) {
  Rng rng(11);
  GaussianMlpEnsemble ens(SmallConfig(3, 2, 1, false), rng);
  const GaussianMlpEnsemble before = ens;
  nn::Adam opt = ens.make_optimizer(nn::AdamConfig{});
  Matrix y = Matrix::Random(4, 2);
  y(0, 0) = std::numeric_limits<double>::infinity();
  const std::vector<Matrix> xs{Matrix::Random(4, 3)}, ys{y};
  EXPECT_THROW(ens.update(xs, ys, opt), nn::NonFiniteError);
  EXPECT_EQ(ens.member(0).layers()[0].weight, before.member(0).layers()[0].weight);
}

TransitionBatch OneRow(const Vector& obs, const Vector& action, const Vector& next,
                       double reward) {
  TransitionBatch b(1, static_cast<std::size_t>(obs.size()),
                    static_cast<std::size_t>(action.size()));
  b.set(0, Transition{obs, action, next, reward, false});
  return b;
}

TEST(WrapperTest, ProcessBatchTargets) {
  Rng rng(0);
  OneDimModelConfig cfg;
  cfg.normalize = false;
  OneDimTransitionRewardModel delta(GaussianMlpEnsemble(SmallConfig(3, 2, 1, true), rng), 2,
                                    1, cfg);
  const auto b = OneRow(Vector::Ones(2), Vector::Zero(1), Vector::Ones(2), 0.5);
  EXPECT_EQ(delta.process_batch(b).second, Matrix::Zero(1, 2));

  cfg.learned_rewards = true;
  OneDimTransitionRewardModel rew(GaussianMlpEnsemble(SmallConfig(3, 3, 1, true), rng), 2, 1,
                                  cfg);
  const Matrix t = rew.process_batch(b).second;
  ASSERT_EQ(t.cols(), 3);
  EXPECT_EQ(t(0, 2), 0.5);

  cfg.learned_rewards = false;
  cfg.target_is_delta = false;
  OneDimTransitionRewardModel raw(GaussianMlpEnsemble(SmallConfig(3, 2, 1, true), rng), 2, 1,
                                  cfg);
  Vector next(2);
  next << 4, -2;
  const auto b2 = OneRow(Vector::Ones(2), Vector::Zero(1), next, 0.0);
  EXPECT_EQ(raw.process_batch(b2).second, next.transpose());
  EXPECT_EQ(raw.process_batch(b2).first.leftCols(2), Matrix::Ones(1, 2));
}

TEST(WrapperTest, RejectsWrongTargetWidth) {
  Rng rng(0);
  OneDimModelConfig cfg;
  cfg.learned_rewards = true;
  EXPECT_THROW(OneDimTransitionRewardModel(
                   GaussianMlpEnsemble(SmallConfig(3, 2, 1, true), rng), 2, 1, cfg),
               std::invalid_argument);
}

TEST(WrapperTest, DeltaConsistencyAndDeterministicSampling) {
  const auto data = LinearData(50, 3);
  Rng rng(1);
  OneDimTransitionRewardModel model(GaussianMlpEnsemble(SmallConfig(3, 2, 3, true), rng), 2,
                                    1, OneDimModelConfig{});
  model.update_normalizer(*data);
  const std::vector<std::size_t> members{0, 1, 2, 0, 1};
  const Matrix obs = data->obs.topRows(5);
  const Matrix act = data->action.topRows(5);
  Rng r1(0), r2(0);
  const ModelSample a = model.sample(obs, act, members, false, r1);
  const ModelSample b = model.sample(obs, act, members, true, r2);
  EXPECT_EQ(a.next_obs, b.next_obs);
  // next_obs = obs + delta is rounded once; undoing it is exact up to an ulp.
  EXPECT_LT((a.next_obs - obs - a.model_mean).cwiseAbs().maxCoeff(), 1e-15);
  const Matrix x = model.model_input(obs, act);
  for (int p = 0; p < 5; ++p) {
    const Matrix direct = model.ensemble().forward_member(members[p], x.row(p)).mean;
    EXPECT_LT((a.model_mean.row(p) - direct.row(0)).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(WrapperTest, FlooredVarianceCollapsesToMean) {
  Rng rng(2);
  GaussianMlpEnsemble ens(SmallConfig(3, 2, 1, false), rng);
  ens.set_logvar_bounds(0, Vector::Constant(2, -60.0), Vector::Constant(2, -50.0));
  auto& last = ens.member(0).layers().back();
  last.bias.tail(2).setConstant(-1e6);
  OneDimTransitionRewardModel model(std::move(ens), 2, 1, OneDimModelConfig{});
  const Matrix obs = Matrix::Random(4, 2), act = Matrix::Random(4, 1);
  const std::vector<std::size_t> members(4, 0);
  Rng r(3);
  const ModelSample s = model.sample(obs, act, members, true, r);
  EXPECT_LT((s.next_obs - obs - s.model_mean).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(WrapperTest, SeededSamplesReproducible) {
  Rng rng(4);
  OneDimTransitionRewardModel model(GaussianMlpEnsemble(SmallConfig(3, 2, 2, false), rng), 2,
                                    1, OneDimModelConfig{});
  const Matrix obs = Matrix::Random(6, 2), act = Matrix::Random(6, 1);
  const std::vector<std::size_t> members{0, 1, 0, 1, 1, 0};
  Rng a(12), b(12);
  EXPECT_EQ(model.sample(obs, act, members, true, a).next_obs,
            model.sample(obs, act, members, true, b).next_obs);
}

TEST(WrapperTest, EnsembleMeanPropagation) {
  Rng rng(5);
  OneDimModelConfig cfg;
  cfg.propagation = Propagation::kEnsembleMean;
  OneDimTransitionRewardModel model(GaussianMlpEnsemble(SmallConfig(3, 2, 3, true), rng), 2,
                                    1, cfg);
  model.ensemble().set_elites({0, 2});
  const Matrix obs = Matrix::Random(3, 2), act = Matrix::Random(3, 1);
  Rng r(0);
  const ModelSample s = model.sample(obs, act, {}, false, r);
  const Matrix x = model.model_input(obs, act);
  EXPECT_EQ(s.model_mean, model.ensemble().mean_predict(x));
}

TEST(WrapperTest, CheckpointRoundTrip) {
  const auto data = LinearData(30, 6);
  Rng rng(6);
  OneDimModelConfig cfg;
  cfg.learned_rewards = true;
  OneDimTransitionRewardModel model(GaussianMlpEnsemble(SmallConfig(3, 3, 3, false), rng), 2,
                                    1, cfg);
  model.update_normalizer(*data);
  model.ensemble().set_elites({2, 0});
  const auto path = std::filesystem::temp_directory_path() / "mbrl_model_rt.ckpt";
  model.save(path);
  const auto back = OneDimTransitionRewardModel::load(path);
  EXPECT_EQ(back.ensemble().elites(), model.ensemble().elites());
  EXPECT_EQ(back.normalizer().mean(), model.normalizer().mean());
  EXPECT_EQ(back.normalizer().std(), model.normalizer().std());
  EXPECT_TRUE(back.config().learned_rewards);
  const Matrix x = Matrix::Random(4, 3);
  for (std::size_t e = 0; e < 3; ++e) {
    EXPECT_EQ(back.ensemble().forward_member(e, x).mean,
              model.ensemble().forward_member(e, x).mean);
    EXPECT_EQ(back.ensemble().forward_member(e, x).logvar,
              model.ensemble().forward_member(e, x).logvar);
  }
}

TEST(TrainerTest, FrozenLearningRateStopsAfterPatience) {
  const auto data = LinearData(64, 7);
  Rng rng(7);
  OneDimTransitionRewardModel model(GaussianMlpEnsemble(SmallConfig(3, 2, 2, true), rng), 2,
                                    1, OneDimModelConfig{});
  model.update_normalizer(*data);
  nn::AdamConfig cfg;
  cfg.learning_rate = 0.0;
  ModelTrainer trainer(model, cfg);
  BootstrapIterator it(data, Iota(64), 2, 16, true, 0);
  TrainOptions opts;
  opts.num_epochs = 20;
  opts.patience = 1;
  const TrainerReport rep = trainer.train(it, nullptr, opts);
  EXPECT_EQ(rep.epochs_run, 2u);
  EXPECT_EQ(rep.best_epoch, 1);
}

TEST(TrainerTest, LinearDataValidationMse) {
  const auto data = LinearData(600, 8);
  Rng rng(8);
  OneDimTransitionRewardModel model(GaussianMlpEnsemble(SmallConfig(3, 2, 5, true), rng), 2,
                                    1, OneDimModelConfig{});
  model.update_normalizer(*data);
  nn::AdamConfig cfg;
  cfg.learning_rate = 3e-3;
  ModelTrainer trainer(model, cfg);
  Rng split_rng(1);
  const auto split = SplitIndices(600, 0.2, split_rng);
  BootstrapIterator it(data, split.train, 5, 32, true, 2);
  TransitionIterator val(data, split.validation, 120, false, 3);
  TrainOptions opts;
  opts.num_epochs = 50;
  const TrainerReport rep = trainer.train(it, &val, opts);
  EXPECT_TRUE(rep.used_validation);
  EXPECT_EQ(rep.epochs_run, 50u);
  const Matrix scores = model.eval_score(val.all());
  double elite_mean = 0.0;
  for (std::size_t e : model.ensemble().elites()) elite_mean += scores.row(e).mean();
  elite_mean /= static_cast<double>(model.ensemble().num_elites());
  EXPECT_LT(elite_mean, 1e-3);
  EXPECT_NEAR(elite_mean, rep.best_score, 1e-12);
}

TEST(TrainerTest, EliteCountAndSnapshotMonotonicity) {
  const auto data = LinearData(200, 9);
  Rng rng(9);
  GaussianMlpConfig mcfg = SmallConfig(3, 2, 7, false);
  mcfg.num_elites = 5;
  OneDimTransitionRewardModel model(GaussianMlpEnsemble(mcfg, rng), 2, 1,
                                    OneDimModelConfig{});
  model.update_normalizer(*data);
  ModelTrainer trainer(model, nn::AdamConfig{});
  BootstrapIterator it(data, Iota(200), 7, 32, true, 4);
  TrainOptions opts;
  opts.num_epochs = 10;
  const TrainerReport rep = trainer.train(it, nullptr, opts);
  EXPECT_EQ(model.ensemble().elites().size(), 5u);
  EXPECT_EQ(rep.elites.size(), 5u);
  ASSERT_FALSE(rep.snapshot_epochs.empty());
  double prev = std::numeric_limits<double>::infinity();
  for (int epoch : rep.snapshot_epochs) {
    const double s = rep.elite_scores[static_cast<std::size_t>(epoch - 1)];
    EXPECT_LE(s, prev);
    prev = s;
  }
  EXPECT_EQ(rep.snapshot_epochs.back(), rep.best_epoch);
}

TEST(TrainerTest, ReportJsonHasFields) {
  TrainerReport rep;
  rep.train_losses = {1.0, 0.5};
  rep.best_epoch = 2;
  const std::string json = rep.to_json();
  EXPECT_NE(json.find("\"best_epoch\""), std::string::npos);
  EXPECT_NE(json.find("\"train_losses\""), std::string::npos);
}

std::shared_ptr<const OneDimTransitionRewardModel> SmallModel(std::size_t e,
                                                              bool learned_rewards) {
  Rng rng(21);
  OneDimModelConfig cfg;
  cfg.learned_rewards = learned_rewards;
  return std::make_shared<OneDimTransitionRewardModel>(
      GaussianMlpEnsemble(SmallConfig(3, learned_rewards ? 3 : 2, e, true), rng), 2, 1, cfg);
}

BoolVector NeverDone(const Matrix&, const Matrix& next) {
  return BoolVector::Constant(next.rows(), false);
}

TEST(ModelEnvTest, ResetSingleParticle) {
  ModelEnv env(SmallModel(3, true), NeverDone);
  Rng rng(0);
  const auto st = env.reset(Matrix::Zero(1, 2), rng);
  EXPECT_EQ(st.members.size(), 1u);
  EXPECT_LT(st.members[0], 3u);
  EXPECT_THROW(env.reset(Matrix::Zero(0, 2), rng), std::invalid_argument);
}

TEST(ModelEnvTest, AssignmentFrequencies) {
  auto model = std::const_pointer_cast<OneDimTransitionRewardModel>(SmallModel(7, true));
  model->ensemble().set_elites({0, 1, 3, 4, 6});
  ModelEnv env(model, NeverDone);
  Rng rng(1);
  const auto st = env.reset(Matrix::Zero(1000, 2), rng);
  std::map<std::size_t, int> counts;
  for (std::size_t m : st.members) ++counts[m];
  EXPECT_EQ(counts.size(), 5u);
  for (auto [m, c] : counts) {
    EXPECT_NE(m, 2u);
    EXPECT_NE(m, 5u);
    // One reset: each frequency within 5 percentage points of 1/5.
    EXPECT_NEAR(c, 200, 50) << "member " << m;
  }
  // Pooled over 20 resets the sampling std is about 57 on an expected 4000,
  // so a 5% relative band is a 3.5 sigma check.
  std::map<std::size_t, int> pooled;
  Rng pool_rng(2);
  for (int k = 0; k < 20; ++k) {
    for (std::size_t m : env.reset(Matrix::Zero(1000, 2), pool_rng).members) ++pooled[m];
  }
  for (auto [m, c] : pooled) EXPECT_NEAR(c, 4000, 200) << "member " << m;
  Rng again(1);
  EXPECT_EQ(env.reset(Matrix::Zero(1000, 2), again).members, st.members);
}

TEST(ModelEnvTest, NeverDoneStaysFalse) {
  ModelEnv env(SmallModel(2, true), NeverDone);
  Rng rng(2);
  auto st = env.reset(Matrix::Random(5, 2), rng);
  for (int i = 0; i < 4; ++i) {
    const auto r = env.step(st, Matrix::Random(5, 1), false, rng);
    EXPECT_FALSE(r.done.any());
  }
}

TEST(ModelEnvTest, RewardFunctionOverridesLearnedHead) {
  RewardFn reward = [](const Matrix& a, const Matrix& next) -> Vector {
    return next.col(0) + a.col(0);
  };
  ModelEnv env(SmallModel(2, true), NeverDone, reward);
  Rng rng(3);
  auto st = env.reset(Matrix::Random(4, 2), rng);
  const Matrix act = Matrix::Random(4, 1);
  const auto r = env.step(st, act, false, rng);
  EXPECT_EQ(r.reward, Vector(r.next_obs.col(0) + act.col(0)));
}

TEST(ModelEnvTest, DoneParticlesAreFrozen) {
  TerminationFn term = [](const Matrix&, const Matrix& next) -> BoolVector {
    BoolVector d = BoolVector::Constant(next.rows(), false);
    d(0) = true;
    return d;
  };
  RewardFn reward = [](const Matrix&, const Matrix& next) -> Vector {
    return Vector::Ones(next.rows());
  };
  ModelEnv env(SmallModel(2, false), term, reward);
  Rng rng(4);
  auto st = env.reset(Matrix::Random(3, 2), rng);
  const auto first = env.step(st, Matrix::Random(3, 1), false, rng);
  EXPECT_TRUE(first.done(0));
  EXPECT_EQ(first.reward(0), 1.0);
  const Matrix held = first.next_obs.row(0);
  for (int i = 0; i < 3; ++i) {
    const auto r = env.step(st, Matrix::Random(3, 1), false, rng);
    EXPECT_TRUE(r.done(0));
    EXPECT_EQ(r.reward(0), 0.0);
    EXPECT_EQ(r.reward(1), 1.0);
    EXPECT_EQ(Matrix(r.next_obs.row(0)), held);
  }
}

TEST(ModelEnvTest, ActionDimMismatch) {
  ModelEnv env(SmallModel(2, true), NeverDone);
  Rng rng(5);
  auto st = env.reset(Matrix::Random(3, 2), rng);
  EXPECT_THROW(env.step(st, Matrix::Random(3, 2), false, rng), std::invalid_argument);
}

}  // namespace
}  // namespace mbrl::models
