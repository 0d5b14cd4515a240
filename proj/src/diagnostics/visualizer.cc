#include "mbrl/diagnostics/visualizer.h"

#include <stdexcept>
#include <string>

#include "mbrl/diagnostics/csv.h"

namespace mbrl::diagnostics {

RolloutComparison CompareRollout(const models::ModelEnv& model_env,
                                 envs::Env& env, planning::Agent& agent,
                                 std::size_t horizon,
                                 std::size_t num_model_samples, Rng& rng) {
  const auto s = static_cast<Eigen::Index>(env.spec().obs_dim);
  const auto a = static_cast<Eigen::Index>(env.spec().action_dim);
  if (model_env.obs_dim() != env.spec().obs_dim ||
      model_env.action_dim() != env.spec().action_dim) {
    throw std::invalid_argument("CompareRollout: model and environment dimensions differ");
  }
  if (horizon == 0 || num_model_samples == 0) {
    throw std::invalid_argument("CompareRollout: horizon and samples must be >= 1");
  }
  const auto h = static_cast<Eigen::Index>(horizon);
  const Vector start = env.state();
  RolloutComparison out;
  out.actions.resize(h, a);
  out.true_obs.resize(h, s);

  Vector obs = start;
  bool done = false;
  for (Eigen::Index t = 0; t < h; ++t) {
    if (!done) {
      const Vector action = agent.act(obs);
      const envs::EnvStep step = env.step(action);
      out.actions.row(t) = action.transpose();
      obs = step.obs;
      done = step.done;
    } else {
      out.actions.row(t).setZero();
    }
    out.true_obs.row(t) = obs.transpose();
  }

  const auto k = static_cast<Eigen::Index>(num_model_samples);
  models::ModelEnvState state = model_env.reset(start.transpose().replicate(k, 1), rng);
  out.model_obs.assign(num_model_samples, Matrix(h, s));
  for (Eigen::Index t = 0; t < h; ++t) {
    const auto r = model_env.step(state, out.actions.row(t).replicate(k, 1), true, rng);
    for (Eigen::Index i = 0; i < k; ++i) {
      out.model_obs[static_cast<std::size_t>(i)].row(t) = r.next_obs.row(i);
    }
  }
  return out;
}

void WriteRolloutComparison(const RolloutComparison& cmp,
                            const std::filesystem::path& path) {
  const Eigen::Index h = cmp.true_obs.rows();
  const Eigen::Index s = cmp.true_obs.cols();
  CsvTable table;
  table.header = {"t", "dim", "true"};
  for (std::size_t i = 0; i < cmp.model_obs.size(); ++i) {
    table.header.push_back("sample_" + std::to_string(i));
  }
  table.rows.resize(h * s, static_cast<Eigen::Index>(table.header.size()));
  Eigen::Index row = 0;
  for (Eigen::Index d = 0; d < s; ++d) {
    for (Eigen::Index t = 0; t < h; ++t, ++row) {
      table.rows(row, 0) = static_cast<double>(t);
      table.rows(row, 1) = static_cast<double>(d);
      table.rows(row, 2) = cmp.true_obs(t, d);
      for (std::size_t i = 0; i < cmp.model_obs.size(); ++i) {
        table.rows(row, 3 + static_cast<Eigen::Index>(i)) = cmp.model_obs[i](t, d);
      }
    }
  }
  WriteCsv(table, path);
}

}  // namespace mbrl::diagnostics
