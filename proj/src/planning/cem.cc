#include "mbrl/planning/cem.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "mbrl/core/number_format.h"

namespace mbrl::planning {
namespace {

constexpr double kMinVariance = 1e-12;

}  // namespace

void CemConfig::validate(std::size_t dim) const {
  if (population == 0) throw std::invalid_argument("cem.population must be >= 1");
  if (num_elites == 0 || num_elites > population) {
    throw std::invalid_argument("cem.num_elites must be in [1, population]");
  }
  if (num_iterations == 0) {
    throw std::invalid_argument("cem.num_iterations must be >= 1");
  }
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("cem.alpha must be in [0, 1)");
  }
  if (static_cast<std::size_t>(lower.size()) != dim ||
      static_cast<std::size_t>(upper.size()) != dim) {
    throw std::invalid_argument("cem.lower/upper must have dimension " +
                                std::to_string(dim));
  }
  if (!lower.allFinite() || !upper.allFinite() ||
      (lower.array() > upper.array()).any()) {
    throw std::invalid_argument("cem bounds must be finite with lower <= upper");
  }
  if (initial_variance.size() != 0) {
    if (static_cast<std::size_t>(initial_variance.size()) != dim) {
      throw std::invalid_argument("cem.initial_variance must have dimension " +
                                  std::to_string(dim));
    }
    if ((initial_variance.array() < 0.0).any() || !initial_variance.allFinite()) {
      throw std::invalid_argument("cem.initial_variance must be finite and >= 0");
    }
  }
}

CemResult CemOptimize(const Objective& objective, const CemConfig& config,
                      const Vector& initial_mean, Rng& rng) {
  const auto dim = static_cast<std::size_t>(initial_mean.size());
  config.validate(dim);
  const Vector half_width = 0.5 * (config.upper - config.lower);
  const Vector var_cap = half_width.array().square();

  Vector mean = initial_mean.cwiseMax(config.lower).cwiseMin(config.upper);
  Vector var = config.initial_variance.size() != 0
                   ? config.initial_variance
                   : Vector((0.5 * half_width).array().square());

  const auto n = static_cast<Eigen::Index>(config.population);
  const std::size_t k = config.num_elites;
  std::normal_distribution<double> normal(0.0, 1.0);
  CemResult result;
  result.best_value = -std::numeric_limits<double>::infinity();
  result.best_sample = mean;

  for (std::size_t it = 0; it < config.num_iterations; ++it) {
    const Vector sample_var = var.cwiseMax(kMinVariance).cwiseMin(var_cap);
    const Vector sample_std = sample_var.cwiseSqrt();
    Matrix samples(n, static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index d = 0; d < samples.cols(); ++d) {
        samples(i, d) = std::clamp(mean(d) + sample_std(d) * normal(rng),
                                   config.lower(d), config.upper(d));
      }
    }
    Vector values = objective(samples);
    if (values.size() != n) {
      throw std::runtime_error("CEM objective returned " +
                               std::to_string(values.size()) + " values for " +
                               std::to_string(n) + " candidates");
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!std::isfinite(values(i))) {
        values(i) = -std::numeric_limits<double>::infinity();
      }
    }

    std::vector<std::size_t> order(config.population);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return values(static_cast<Eigen::Index>(a)) >
             values(static_cast<Eigen::Index>(b));
    });
    order.resize(k);

    Vector elite_mean = Vector::Zero(static_cast<Eigen::Index>(dim));
    double elite_value = 0.0;
    for (std::size_t i : order) {
      elite_mean += samples.row(static_cast<Eigen::Index>(i)).transpose();
      elite_value += values(static_cast<Eigen::Index>(i));
    }
    elite_mean /= static_cast<double>(k);
    Vector elite_var = Vector::Zero(static_cast<Eigen::Index>(dim));
    for (std::size_t i : order) {
      elite_var += (samples.row(static_cast<Eigen::Index>(i)).transpose() -
                    elite_mean).array().square().matrix();
    }
    elite_var /= static_cast<double>(k);

    const auto top = static_cast<Eigen::Index>(order.front());
    if (values(top) > result.best_value) {
      result.best_value = values(top);
      result.best_sample = samples.row(top).transpose();
    }

    CemIteration rec;
    rec.iteration = it;
    rec.sampling_mean = mean;
    rec.sampling_variance = sample_var;
    rec.elite_indices = order;
    rec.best_value = result.best_value;
    rec.mean_elite_value = elite_value / static_cast<double>(k);

    mean = config.alpha * mean + (1.0 - config.alpha) * elite_mean;
    var = config.alpha * var + (1.0 - config.alpha) * elite_var;

    rec.mean = mean;
    rec.variance = var;
    if (config.keep_samples) {
      rec.samples = std::move(samples);
      rec.values = std::move(values);
    }
    result.trace.push_back(std::move(rec));
  }

  if (config.return_mode == CemReturn::kMean) {
    result.solution = mean;
    Matrix single = mean.transpose();
    const Vector v = objective(single);
    result.value = std::isfinite(v(0)) ? v(0)
                                       : -std::numeric_limits<double>::infinity();
  } else {
    result.solution = result.best_sample;
    result.value = result.best_value;
  }
  return result;
}

void WriteCemTrace(const std::vector<CemIteration>& trace,
                   const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "iteration,best_value,mean_elite_value,mean_norm,var_norm\n";
  for (const auto& it : trace) {
    out << it.iteration << ',' << FormatDouble(it.best_value) << ','
        << FormatDouble(it.mean_elite_value) << ',' << FormatDouble(it.mean.norm())
        << ',' << FormatDouble(it.variance.norm()) << '\n';
  }
}

}  // namespace mbrl::planning
