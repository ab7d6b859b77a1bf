// Command line front end: run experiments, calibrate bounds, emit presets
// and run the built-in property checks.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bcomb/combiner.hpp"
#include "bcomb/harness/experiment.hpp"
#include "bcomb/harness/oracles.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kRuntimeError = 3;

nlohmann::json parse_spec(const std::string& spec) {
  // A spec is inline JSON or a path to a JSON file.
  try {
    return nlohmann::json::parse(spec);
  } catch (const nlohmann::json::parse_error&) {
  }
  std::ifstream in(spec);
  if (!in) throw bcomb::ConfigError("spec is neither JSON nor a readable file: " + spec);
  try {
    return nlohmann::json::parse(in, nullptr, true, true);
  } catch (const nlohmann::json::parse_error& e) {
    throw bcomb::ConfigError(std::string("spec parse error: ") + e.what());
  }
}

int cmd_run(const std::string& config, const std::string& out, int reps, long long seed) {
  bcomb::ExperimentConfig cfg = bcomb::load_experiment_config(config);
  if (reps > 0) cfg.replications = static_cast<std::size_t>(reps);
  if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
  const auto result = bcomb::run_experiment(cfg);
  bcomb::write_experiment(result, out);
  for (const auto& p : result.policies)
    std::cout << p.name << " mean_final_regret=" << bcomb::format_double(result.mean_final_regret(p.name)) << '\n';
  return kOk;
}

int cmd_calibrate(const std::string& base_spec, const std::string& env_spec, double alpha, std::size_t horizon,
                  std::size_t reps, std::uint64_t seed, double delta) {
  const bcomb::BaseConfig base = bcomb::parse_base_config(parse_spec(base_spec));
  const bcomb::EnvConfig env = bcomb::parse_env_config(parse_spec(env_spec));
  if (!(alpha >= 0.5 && alpha <= 1.0)) throw bcomb::ConfigError("--alpha must lie in [0.5, 1]");
  if (horizon < 1) throw bcomb::ConfigError("--horizon must be >= 1");
  const auto result = bcomb::calibrate_putative_bound(bcomb::make_base_factory(base, env, horizon, delta),
                                                      bcomb::make_env_factory(env), horizon, alpha, reps, seed,
                                                      bcomb::base_display_name(base));
  nlohmann::json j{{"base", result.base}, {"C", result.C}, {"alpha", result.alpha}, {"per_rep", result.per_rep}};
  std::cout << j.dump(2) << '\n';
  return kOk;
}

int cmd_presets(const std::string& name, const std::string& out, double alpha_mix) {
  const auto cfg = bcomb::preset_config(name, alpha_mix);
  std::ofstream file(out, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write '" + out + "'");
  file << bcomb::to_json(cfg).dump(2) << '\n';
  return kOk;
}

int cmd_selftest() {
  bool ok = true;
  auto report = [&](const char* name, bool pass) {
    std::cout << (pass ? "PASS " : "FAIL ") << name << '\n';
    ok = ok && pass;
  };

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  bool sup_ok = true;
  for (int k = 0; k < 200; ++k) {
    const double A = 10.0 * U(rng);
    const double B = 0.1 + 9.9 * U(rng);
    const double alpha = 0.5 + 0.49 * U(rng);
    const double cf = bcomb::alphabound_sup(A, B, alpha);
    const double bf = bcomb::brute_force_sup_log(A, B, alpha);
    if (std::abs(cf - bf) > 1e-3 * std::abs(cf) + 1e-280) sup_ok = false;
  }
  report("closed-form supremum matches brute force", sup_ok);

  bool target_ok = true;
  for (int k = 0; k < 50; ++k) {
    const std::size_t n = 1 + static_cast<std::size_t>(U(rng) * 5.0);
    const double log_t = 2.0 + 3.0 * U(rng);
    const auto T = static_cast<std::size_t>(std::pow(10.0, log_t));
    bcomb::CombinerConfig cfg;
    bcomb::EtaPrior prior;
    for (std::size_t i = 0; i < n; ++i) {
      cfg.bounds.push_back({20.0 * U(rng), 0.5 + 0.5 * U(rng)});
      prior.etas.push_back(std::pow(10.0, -0.5 * log_t * U(rng)));
    }
    cfg.horizon = T;
    cfg.delta = 0.01 + 0.2 * U(rng);
    cfg.targets = bcomb::target_regrets_from_eta(cfg.bounds, prior, T, cfg.delta);
    if (!bcomb::check_target_regret_conditions(cfg)) target_ok = false;
  }
  report("target regrets satisfy the feasibility conditions", target_ok);

  bool grid_ok = true;
  for (std::size_t T : {16u, 1000u, 65536u}) {
    const auto shape = bcomb::doubling_grid_shape(T, 0.05);
    if (shape.M == 0 || shape.K == 0 || shape.L == 0) grid_ok = false;
  }
  report("doubling grid is non-empty", grid_ok);

  bool csv_ok = true;
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 123456789.123456789})
    if (std::stod(bcomb::format_double(v)) != v) csv_ok = false;
  report("CSV floats round-trip", csv_ok);

  return ok ? kOk : kRuntimeError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bandit combiner simulations"};
  app.require_subcommand(1);

  std::string config, out;
  int reps = 0;
  long long seed = -1;
  auto* run = app.add_subcommand("run", "Run an experiment config");
  run->add_option("--config", config, "Experiment config (JSON)")->required();
  run->add_option("--out", out, "Output directory")->required();
  run->add_option("--reps", reps, "Override the replication count");
  run->add_option("--seed", seed, "Override the base seed");

  std::string base_spec, env_spec;
  double alpha = 0.5;
  std::size_t horizon = 0;
  std::size_t cal_reps = 5;
  std::uint64_t cal_seed = 1;
  double delta = 0.05;
  auto* calibrate = app.add_subcommand("calibrate", "Fit C for a base with alpha fixed");
  calibrate->add_option("--base", base_spec, "Base spec (inline JSON or file)")->required();
  calibrate->add_option("--env", env_spec, "Environment spec (inline JSON or file)")->required();
  calibrate->add_option("--alpha", alpha, "Fixed exponent")->required();
  calibrate->add_option("--horizon", horizon, "Horizon T")->required();
  calibrate->add_option("--reps", cal_reps, "Replications");
  calibrate->add_option("--seed", cal_seed, "Seed");
  calibrate->add_option("--delta", delta, "Confidence level for default widths");

  std::string preset_name, preset_out;
  double alpha_mix = 0.0;
  auto* presets = app.add_subcommand("presets", "Write a preset experiment config");
  presets->add_option("--name", preset_name, "misspecified | modelselection | karmed | gap")->required();
  presets->add_option("--out", preset_out, "Output path")->required();
  presets->add_option("--alpha-mix", alpha_mix, "Mixing weight for the misspecified preset (0 or 1)");

  auto* selftest = app.add_subcommand("selftest", "Run the built-in property checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*run) return cmd_run(config, out, reps, seed);
    if (*calibrate) return cmd_calibrate(base_spec, env_spec, alpha, horizon, cal_reps, cal_seed, delta);
    if (*presets) return cmd_presets(preset_name, preset_out, alpha_mix);
    if (*selftest) return cmd_selftest();
  } catch (const bcomb::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kOk;
}
