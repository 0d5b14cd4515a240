#ifndef MBRL_DIAGNOSTICS_DATASET_EVALUATOR_H_
#define MBRL_DIAGNOSTICS_DATASET_EVALUATOR_H_

#include <filesystem>
#include <vector>

#include "mbrl/core/replay_buffer.h"
#include "mbrl/models/one_dim_model.h"

namespace mbrl::diagnostics {

struct DimensionEvaluation {
  Vector predicted;
  Vector target;
  double mse = 0.0;
  double r2 = 0.0;
};

// One entry per model target dimension.
struct EvaluationTable {
  std::vector<DimensionEvaluation> dims;
};

// Mean of the squared differences and the coefficient of determination.
void Summarize(DimensionEvaluation& dim);

// Elite-averaged predictions of the model targets on every transition of
// `dataset`, compared to the true targets.
EvaluationTable EvaluateDataset(const models::OneDimTransitionRewardModel& model,
                                const ReplayBuffer& dataset);

// eval_dim_<d>.csv (predicted,target) per dimension plus eval_summary.csv
// (dim,count,mse,r2).
void WriteEvaluationTable(const EvaluationTable& table,
                          const std::filesystem::path& dir);
EvaluationTable ReadEvaluationTable(const std::filesystem::path& dir);

}  // namespace mbrl::diagnostics

#endif  // MBRL_DIAGNOSTICS_DATASET_EVALUATOR_H_
