#include "mbrl/diagnostics/dataset_evaluator.h"

#include <stdexcept>
#include <string>

#include "mbrl/diagnostics/csv.h"

namespace mbrl::diagnostics {

// Plain left-to-right sums, so the summary can be recomputed bit for bit from
// the emitted pairs.
void Summarize(DimensionEvaluation& dim) {
  const Eigen::Index n = dim.target.size();
  double ss_res = 0.0;
  double target_sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double e = dim.predicted(i) - dim.target(i);
    ss_res += e * e;
    target_sum += dim.target(i);
  }
  const double target_mean = target_sum / static_cast<double>(n);
  double ss_tot = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double c = dim.target(i) - target_mean;
    ss_tot += c * c;
  }
  dim.mse = ss_res / static_cast<double>(n);
  if (ss_tot > 0.0) {
    dim.r2 = 1.0 - ss_res / ss_tot;
  } else {
    dim.r2 = ss_res == 0.0 ? 1.0 : 0.0;
  }
}

EvaluationTable EvaluateDataset(const models::OneDimTransitionRewardModel& model,
                                const ReplayBuffer& dataset) {
  if (dataset.empty()) throw std::invalid_argument("EvaluateDataset: empty dataset");
  if (dataset.obs_dim() != model.obs_dim() ||
      dataset.action_dim() != model.action_dim()) {
    throw std::invalid_argument(
        "EvaluateDataset: dataset has (obs " + std::to_string(dataset.obs_dim()) +
        ", action " + std::to_string(dataset.action_dim()) + ") but model has (obs " +
        std::to_string(model.obs_dim()) + ", action " +
        std::to_string(model.action_dim()) + ")");
  }
  const auto [input, target] = model.process_batch(dataset.all());
  const Matrix pred = model.ensemble().mean_predict(input);
  EvaluationTable table;
  for (Eigen::Index d = 0; d < target.cols(); ++d) {
    DimensionEvaluation dim{pred.col(d), target.col(d)};
    Summarize(dim);
    table.dims.push_back(std::move(dim));
  }
  return table;
}

void WriteEvaluationTable(const EvaluationTable& table,
                          const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  CsvTable summary{{"dim", "count", "mse", "r2"},
                   Matrix(static_cast<Eigen::Index>(table.dims.size()), 4)};
  for (std::size_t d = 0; d < table.dims.size(); ++d) {
    const auto& dim = table.dims[d];
    CsvTable pairs{{"predicted", "target"}, Matrix(dim.target.size(), 2)};
    pairs.rows.col(0) = dim.predicted;
    pairs.rows.col(1) = dim.target;
    WriteCsv(pairs, dir / ("eval_dim_" + std::to_string(d) + ".csv"));
    summary.rows.row(static_cast<Eigen::Index>(d))
        << static_cast<double>(d), static_cast<double>(dim.target.size()), dim.mse,
        dim.r2;
  }
  WriteCsv(summary, dir / "eval_summary.csv");
}

EvaluationTable ReadEvaluationTable(const std::filesystem::path& dir) {
  const CsvTable summary = ReadCsv(dir / "eval_summary.csv");
  EvaluationTable table;
  for (Eigen::Index d = 0; d < summary.rows.rows(); ++d) {
    const CsvTable pairs = ReadCsv(dir / ("eval_dim_" + std::to_string(d) + ".csv"));
    DimensionEvaluation dim{pairs.rows.col(0), pairs.rows.col(1),
                            summary.rows(d, 2), summary.rows(d, 3)};
    table.dims.push_back(std::move(dim));
  }
  return table;
}

}  // namespace mbrl::diagnostics
