#ifndef MBRL_DIAGNOSTICS_CONFIG_H_
#define MBRL_DIAGNOSTICS_CONFIG_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "mbrl/algorithms/pets.h"
#include "mbrl/envs/env.h"

namespace mbrl::diagnostics {

// Raised for malformed, unknown or unresolved configuration entries.
// `key_path()` is the dotted location, e.g. "overrides.trial_length".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key_path, const std::string& what)
      : std::runtime_error(key_path + ": " + what), key_path_(std::move(key_path)) {}
  const std::string& key_path() const { return key_path_; }

 private:
  std::string key_path_;
};

// The string that marks a value to be completed from the environment.
inline constexpr char kRuntimeSentinel[] = "???";

struct RunConfig {
  algorithms::PetsConfig pets;
  // nullopt while still holding the sentinel.
  std::optional<std::size_t> in_size;
  std::optional<std::size_t> out_size;
  std::size_t eval_episodes = 1;  // true-env control episodes
  std::size_t visualize_samples = 3;
  std::string text;  // source document, for run snapshots

  bool resolved() const { return in_size.has_value() && out_size.has_value(); }
};

// YAML layout with sections dynamics_model.model, algorithm, overrides,
// agent, optimizer and a top-level seed. Unknown keys raise ConfigError.
RunConfig ParseRunConfig(const std::string& yaml_text);
RunConfig LoadRunConfig(const std::filesystem::path& path);

// Fills sentinel sizes from the environment (in = S + A, out = S plus one
// when rewards are learned) and checks explicit sizes against it.
void ResolveRunConfig(RunConfig& config, const envs::EnvSpec& spec);

}  // namespace mbrl::diagnostics

#endif  // MBRL_DIAGNOSTICS_CONFIG_H_
