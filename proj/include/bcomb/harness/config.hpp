#pragma once

// Experiment configuration. Configs are JSON objects; every field has a
// default and unknown keys are rejected so that typos surface as errors.
//
// {
//   "kind": "misspecified" | "model_selection" | "karmed" | "adversarial" | "custom",
//   "horizon": 20000, "delta": 0.05, "seed": 1, "replications": 20, "threads": 0,
//   "targets": "eta" | "experiment" | "gap" | "explicit",
//   "calibration_replications": 5,
//   "bases_alone": true,
//   "environment": { "type": ..., see EnvConfig },
//   "bases":     [ { see BaseConfig }, ... ],
//   "baselines": [ { see BaseConfig }, ... ],
//   "flags": { "clamp_rewards": false, "literal_threshold": false,
//              "literal_beta": false, "doubling": false }
// }

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace bcomb {

/// Raised for malformed or inconsistent experiment definitions.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ExperimentKind { kMisspecified, kModelSelection, kKArmed, kAdversarial, kCustom };
enum class TargetRule { kEta, kExperiment, kGap, kExplicit };

struct EnvConfig {
  std::string type = "misspecified";  ///< misspecified | model_selection | karmed | adversarial_linear
  std::size_t arms = 50;
  std::size_t dim = 10;
  std::size_t dim_star = 8;
  double alpha_mix = 0.0;
  double sigma = 0.1;
  std::vector<double> means;      ///< karmed
  std::string noise = "gaussian";  ///< karmed: gaussian | bernoulli; adversarial: rademacher | uniform
  double noise_scale = 1.0;        ///< adversarial uniform noise
  std::vector<double> theta_star;  ///< adversarial; empty draws a unit vector
  std::string schedule = "spherical";

  /// Sub-Gaussian scale of the observation noise, used by default linUCB radii.
  double noise_sigma() const;
  /// Norm bound of the linear parameter, used by default linUCB radii.
  double theta_norm() const;
};

struct BaseConfig {
  std::string name;              ///< defaults to a name derived from the type
  std::string type = "ucb";      ///< ucb | linucb | fixed
  std::vector<std::size_t> arms;  ///< ucb subset; empty means every arm
  std::size_t arm = 0;            ///< fixed
  std::size_t dim = 0;            ///< linucb prefix; 0 means the full context
  double lambda = 2.0;
  std::optional<double> conf_scale;
  std::optional<double> beta;
  std::optional<double> C;
  double alpha = 0.5;
  std::optional<double> eta;
  std::optional<double> R;
  bool calibrate = false;
  nlohmann::json calibration_env = nlohmann::json::object();
};

struct ExperimentFlags {
  bool clamp_rewards = false;
  bool literal_threshold = false;
  bool literal_beta = false;
  bool doubling = false;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kCustom;
  EnvConfig env;
  std::vector<BaseConfig> bases;
  std::vector<BaseConfig> baselines;
  bool bases_alone = true;
  TargetRule targets = TargetRule::kEta;
  std::size_t horizon = 1000;
  double delta = 0.05;
  std::uint64_t seed = 1;
  std::size_t replications = 1;
  std::size_t threads = 1;
  std::size_t calibration_replications = 5;
  ExperimentFlags flags;
};

EnvConfig parse_env_config(const nlohmann::json& j);
BaseConfig parse_base_config(const nlohmann::json& j);
ExperimentConfig parse_experiment_config(const nlohmann::json& j);
ExperimentConfig load_experiment_config(const std::string& path);

nlohmann::json to_json(const EnvConfig& env);
nlohmann::json to_json(const BaseConfig& base);
nlohmann::json to_json(const ExperimentConfig& cfg);

/// Applies the keys of `overrides` on top of `env`.
EnvConfig merge_env(const EnvConfig& env, const nlohmann::json& overrides);

std::string base_display_name(const BaseConfig& base);

}  // namespace bcomb
