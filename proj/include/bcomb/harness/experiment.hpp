#pragma once

// Calibration of putative bounds, construction of environments and bases
// from configs, replicated experiment runs, and the preset configurations.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bcomb/core.hpp"
#include "bcomb/harness/config.hpp"
#include "bcomb/harness/csv.hpp"

namespace bcomb {

using EnvFactory = std::function<std::unique_ptr<Environment>(Rng&)>;

struct CalibrationResult {
  std::string base;
  double C = 0.0;
  double alpha = 0.5;
  /// max over t of regret(t) / t^alpha, one entry per replication
  std::vector<double> per_rep;
};

/// Runs the base alone `reps` times on fresh instances and returns
/// C = max over reps and t in 1..T of regret(t) / t^alpha.
CalibrationResult calibrate_putative_bound(const BaseFactory& base, const EnvFactory& env, std::size_t horizon,
                                           double alpha, std::size_t reps, std::uint64_t seed,
                                           const std::string& base_id = "base");

/// Random streams of one replication: stream = rep * kStreamsPerRep + slot.
inline constexpr std::uint64_t kStreamsPerRep = 4096;
inline constexpr std::uint64_t kSlotEnvInstance = 0;
inline constexpr std::uint64_t kSlotEnvNoise = 1;
inline constexpr std::uint64_t kSlotBase = 3;
/// Calibration seeds are offset so they never share instances with the runs.
inline constexpr std::uint64_t kCalibrationOffset = std::uint64_t{1} << 40;

EnvFactory make_env_factory(const EnvConfig& env);
/// Builds a base for the given environment. UCB widths default to unit noise;
/// linUCB radii default to the environment's noise and parameter scales.
BaseFactory make_base_factory(const BaseConfig& base, const EnvConfig& env, std::size_t horizon, double delta);

struct PolicyResult {
  std::string name;
  std::vector<RegretTrace> reps;
};

struct ExperimentResult {
  std::vector<PolicyResult> policies;
  std::vector<CalibrationResult> calibration;
  std::vector<PutativeBound> bounds;
  std::vector<double> targets;
  nlohmann::json metadata;

  const PolicyResult& policy(const std::string& name) const;
  double mean_final_regret(const std::string& name) const;
};

/// Runs every policy for every replication; output is independent of the
/// number of worker threads.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Writes trace_<policy>.csv, summary.csv and metadata.json into `dir`.
void write_experiment(const ExperimentResult& result, const std::string& dir);

std::string config_hash(const ExperimentConfig& cfg);
std::string library_version();

/// Preset names: misspecified (alpha_mix 0 or 1), modelselection, karmed, gap.
ExperimentConfig preset_config(const std::string& name, double alpha_mix = 0.0);
std::vector<std::string> preset_names();

}  // namespace bcomb
