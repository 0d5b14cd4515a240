#ifndef MBRL_NN_CHECKPOINT_H_
#define MBRL_NN_CHECKPOINT_H_

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "mbrl/core/types.h"
#include "mbrl/nn/dense_net.h"

namespace mbrl::nn {

// Self-describing text checkpoint: a version line, string metadata, and named
// matrices. Values are written in shortest round-trip form, so save/load is
// bit-exact.
struct Checkpoint {
  static constexpr int kVersion = 1;

  std::map<std::string, std::string> meta;
  std::vector<std::pair<std::string, Matrix>> arrays;

  void add(std::string name, Matrix value);
  const Matrix& get(const std::string& name) const;
  bool has(const std::string& name) const;
  const std::string& meta_at(const std::string& key) const;

  void save(const std::filesystem::path& path) const;
  static Checkpoint load(const std::filesystem::path& path);
};

// Stores `net` under "<prefix>.layer<i>.weight" / ".bias" plus its
// activation under meta "<prefix>.activation".
void AddNet(Checkpoint& ckpt, const std::string& prefix, const DenseNet& net);
DenseNet GetNet(const Checkpoint& ckpt, const std::string& prefix);

}  // namespace mbrl::nn

#endif  // MBRL_NN_CHECKPOINT_H_
