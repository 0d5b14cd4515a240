#ifndef MBRL_CORE_TYPES_H_
#define MBRL_CORE_TYPES_H_

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace mbrl {

// All numerics are 64-bit. Batches are stored row-per-sample.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using BoolVector = Eigen::Array<bool, Eigen::Dynamic, 1>;

using Rng = std::mt19937_64;

// Derives an independent generator seed from a parent seed and a stream id
// (splitmix64 finalizer).
inline uint64_t MixSeed(uint64_t seed, uint64_t stream) {
  uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace mbrl

#endif  // MBRL_CORE_TYPES_H_
