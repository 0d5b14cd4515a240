#ifndef MBRL_PLANNING_CEM_H_
#define MBRL_PLANNING_CEM_H_

#include <cstddef>
#include <filesystem>
#include <functional>
#include <vector>

#include "mbrl/core/types.h"

namespace mbrl::planning {

// Maps N candidate rows (N x D) to N values; larger is better.
using Objective = std::function<Vector(const Matrix& candidates)>;

enum class CemReturn { kMean, kBestSample };

struct CemConfig {
  std::size_t population = 350;
  std::size_t num_elites = 35;
  std::size_t num_iterations = 5;
  double alpha = 0.1;  // weight on the previous distribution when refitting
  CemReturn return_mode = CemReturn::kMean;
  Vector lower;             // D
  Vector upper;             // D
  Vector initial_variance;  // D; empty means ((upper - lower) / 4)^2
  bool keep_samples = false;

  // Throws std::invalid_argument naming the offending field.
  void validate(std::size_t dim) const;
};

struct CemIteration {
  std::size_t iteration = 0;
  Vector sampling_mean;
  Vector sampling_variance;
  std::vector<std::size_t> elite_indices;  // best first
  double best_value = 0.0;                 // best seen so far, all iterations
  double mean_elite_value = 0.0;
  Vector mean;      // refit result
  Vector variance;  // refit result
  Matrix samples;   // kept only with keep_samples
  Vector values;    // kept only with keep_samples
};

struct CemResult {
  Vector solution;
  double value = 0.0;
  Vector best_sample;
  double best_value = 0.0;
  std::vector<CemIteration> trace;
};

// Cross-entropy method over a diagonal Gaussian. Each iteration samples the
// population, clips it to the box, keeps the top-k by objective value (a
// non-finite value ranks last) and refits
//   mean = alpha * mean + (1 - alpha) * elite_mean
//   var  = alpha * var  + (1 - alpha) * elite_var.
// The sampling variance is capped at ((upper - lower) / 2)^2.
CemResult CemOptimize(const Objective& objective, const CemConfig& config,
                      const Vector& initial_mean, Rng& rng);

// CSV with columns iteration,best_value,mean_elite_value,mean_norm,var_norm.
void WriteCemTrace(const std::vector<CemIteration>& trace,
                   const std::filesystem::path& path);

}  // namespace mbrl::planning

#endif  // MBRL_PLANNING_CEM_H_
