#include "mbrl/diagnostics/config.h"

#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace mbrl::diagnostics {
namespace {

using Handler = std::function<void(const YAML::Node&, const std::string&)>;

std::string Join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

template <typename T>
T As(const YAML::Node& node, const std::string& path) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(path, "invalid value '" +
                                (node.IsScalar() ? node.Scalar() : "<non-scalar>") +
                                "'");
  }
}

std::size_t AsCount(const YAML::Node& node, const std::string& path) {
  const auto v = As<long long>(node, path);
  if (v < 0) throw ConfigError(path, "must be non-negative");
  return static_cast<std::size_t>(v);
}

bool IsSentinel(const YAML::Node& node) {
  return node.IsScalar() && node.Scalar() == kRuntimeSentinel;
}

// Dispatches each key of a mapping to its handler; unknown keys are errors.
void Walk(const YAML::Node& node, const std::string& path,
          const std::map<std::string, Handler>& handlers) {
  if (!node || node.IsNull()) return;
  if (!node.IsMap()) throw ConfigError(path, "expected a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    const std::string key_path = Join(path, key);
    auto it = handlers.find(key);
    if (it == handlers.end()) throw ConfigError(key_path, "unknown key");
    if (IsSentinel(kv.second) && key != "in_size" && key != "out_size") {
      throw ConfigError(key_path, "runtime sentinel not allowed here");
    }
    it->second(kv.second, key_path);
  }
}

Handler SetCount(std::size_t& field) {
  return [&field](const YAML::Node& n, const std::string& p) { field = AsCount(n, p); };
}
Handler SetDouble(double& field) {
  return [&field](const YAML::Node& n, const std::string& p) { field = As<double>(n, p); };
}
Handler SetBool(bool& field) {
  return [&field](const YAML::Node& n, const std::string& p) { field = As<bool>(n, p); };
}
Handler SetString(std::string& field) {
  return [&field](const YAML::Node& n, const std::string& p) {
    field = As<std::string>(n, p);
  };
}
Handler SetOptionalSize(std::optional<std::size_t>& field) {
  return [&field](const YAML::Node& n, const std::string& p) {
    if (IsSentinel(n)) {
      field.reset();
    } else {
      field = AsCount(n, p);
    }
  };
}

// Desk-scale continuous cart-pole defaults.
RunConfig Defaults() {
  RunConfig c;
  auto& p = c.pets;
  p.model.num_layers = 3;
  p.model.hid_size = 64;
  p.model.ensemble_size = 5;
  p.model.num_elites = 0;  // every member
  p.model.deterministic = true;
  p.agent.horizon = 15;
  p.agent.cem.population = 100;
  p.agent.cem.num_elites = 10;
  p.agent.cem.num_iterations = 4;
  p.agent.cem.alpha = 0.1;
  p.particles = 5;
  p.training.num_epochs = 25;
  p.training.patience = 5;
  p.training.batch_size = 64;
  return c;
}

}  // namespace

RunConfig ParseRunConfig(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ConfigError("<document>", std::string("YAML parse error: ") + e.what());
  }
  RunConfig c = Defaults();
  c.text = yaml_text;
  c.in_size.reset();
  c.out_size.reset();
  auto& p = c.pets;

  // _target_ and device are accepted for layout compatibility; only the
  // built-in Gaussian MLP on the CPU exists.
  const Handler informational = [](const YAML::Node& n, const std::string& path) {
    As<std::string>(n, path);
  };
  const std::map<std::string, Handler> model_keys{
      {"_target_", informational},
      {"device", informational},
      {"num_layers", SetCount(p.model.num_layers)},
      {"in_size", SetOptionalSize(c.in_size)},
      {"out_size", SetOptionalSize(c.out_size)},
      {"ensemble_size", SetCount(p.model.ensemble_size)},
      {"num_elites", SetCount(p.model.num_elites)},
      {"hid_size", SetCount(p.model.hid_size)},
      {"use_silu", [&](const YAML::Node& n, const std::string& path) {
         p.model.activation =
             As<bool>(n, path) ? nn::Activation::kSilu : nn::Activation::kRelu;
       }},
      {"deterministic", SetBool(p.model.deterministic)},
      {"propagation_method", [&](const YAML::Node& n, const std::string& path) {
         try {
           p.wrapper.propagation = models::ParsePropagation(As<std::string>(n, path));
         } catch (const std::invalid_argument& e) {
           throw ConfigError(path, e.what());
         }
       }},
      {"min_logvar", SetDouble(p.model.min_logvar_init)},
      {"max_logvar", SetDouble(p.model.max_logvar_init)},
      {"logvar_bound_coef", SetDouble(p.model.logvar_bound_coef)},
  };
  const std::map<std::string, Handler> dynamics_keys{
      {"model", [&](const YAML::Node& n, const std::string& path) {
         Walk(n, path, model_keys);
       }},
  };
  const std::map<std::string, Handler> algorithm_keys{
      {"name", [](const YAML::Node& n, const std::string& path) {
         if (As<std::string>(n, path) != "pets") {
           throw ConfigError(path, "only 'pets' is supported");
         }
       }},
      {"initial_exploration_steps", SetCount(p.initial_exploration_steps)},
      {"learned_rewards", SetBool(p.wrapper.learned_rewards)},
      {"target_is_delta", SetBool(p.wrapper.target_is_delta)},
      {"normalize", SetBool(p.wrapper.normalize)},
      {"model_retrain_interval", SetCount(p.model_retrain_interval)},
  };
  const std::map<std::string, Handler> override_keys{
      {"env", SetString(p.env)},
      {"term_fn", SetString(p.term_fn)},
      {"reward_fn", SetString(p.reward_fn)},
      {"trial_length", SetCount(p.trial_length)},
      {"num_trials", SetCount(p.num_trials)},
      {"model_batch_size", SetCount(p.training.batch_size)},
      {"validation_ratio", SetDouble(p.training.validation_ratio)},
      {"num_epochs_train_model", SetCount(p.training.num_epochs)},
      {"patience", SetCount(p.training.patience)},
      {"improvement_threshold", SetDouble(p.training.improvement_threshold)},
      {"bootstrap", SetBool(p.training.bootstrap)},
      {"shuffle_each_epoch", SetBool(p.training.shuffle_each_epoch)},
      {"model_lr", SetDouble(p.optim.learning_rate)},
      {"model_wd", SetDouble(p.optim.weight_decay)},
      {"buffer_capacity", SetCount(p.buffer_capacity)},
      {"eval_episodes", SetCount(c.eval_episodes)},
      {"visualize_samples", SetCount(c.visualize_samples)},
  };
  const std::map<std::string, Handler> agent_keys{
      {"planning_horizon", SetCount(p.agent.horizon)},
      {"particles", SetCount(p.particles)},
      {"warm_start", SetBool(p.agent.warm_start)},
  };
  const std::map<std::string, Handler> optimizer_keys{
      {"population_size", SetCount(p.agent.cem.population)},
      {"num_elites", SetCount(p.agent.cem.num_elites)},
      {"num_iterations", SetCount(p.agent.cem.num_iterations)},
      {"alpha", SetDouble(p.agent.cem.alpha)},
      {"return_mean_elites", [&](const YAML::Node& n, const std::string& path) {
         p.agent.cem.return_mode =
             As<bool>(n, path) ? planning::CemReturn::kMean : planning::CemReturn::kBestSample;
       }},
      {"initial_variance", [&](const YAML::Node& n, const std::string& path) {
         p.agent.cem.initial_variance = Vector::Constant(1, As<double>(n, path));
       }},
  };
  const std::map<std::string, Handler> top{
      {"dynamics_model", [&](const YAML::Node& n, const std::string& path) {
         Walk(n, path, dynamics_keys);
       }},
      {"algorithm", [&](const YAML::Node& n, const std::string& path) {
         Walk(n, path, algorithm_keys);
       }},
      {"overrides", [&](const YAML::Node& n, const std::string& path) {
         Walk(n, path, override_keys);
       }},
      {"agent", [&](const YAML::Node& n, const std::string& path) {
         Walk(n, path, agent_keys);
       }},
      {"optimizer", [&](const YAML::Node& n, const std::string& path) {
         Walk(n, path, optimizer_keys);
       }},
      {"seed", [&](const YAML::Node& n, const std::string& path) {
         p.seed = As<uint64_t>(n, path);
       }},
  };
  Walk(root, "", top);

  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    const auto space = msg.find(' ');
    throw ConfigError(msg.substr(0, space), msg.substr(space + 1));
  }
  return c;
}

RunConfig LoadRunConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseRunConfig(ss.str());
}

void ResolveRunConfig(RunConfig& config, const envs::EnvSpec& spec) {
  const std::size_t in = spec.obs_dim + spec.action_dim;
  const std::size_t out = spec.obs_dim + (config.pets.wrapper.learned_rewards ? 1 : 0);
  if (config.in_size && *config.in_size != in) {
    throw ConfigError("dynamics_model.model.in_size",
                      "is " + std::to_string(*config.in_size) + " but environment needs " +
                          std::to_string(in));
  }
  if (config.out_size && *config.out_size != out) {
    throw ConfigError("dynamics_model.model.out_size",
                      "is " + std::to_string(*config.out_size) + " but environment needs " +
                          std::to_string(out));
  }
  config.in_size = in;
  config.out_size = out;
  config.pets.model.in_size = in;
  config.pets.model.out_size = out;
}

}  // namespace mbrl::diagnostics
