#include "bcomb/harness/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <numeric>
#include <set>
#include <stdexcept>
#include <thread>

#include "bcomb/adversarial.hpp"
#include "bcomb/bases.hpp"
#include "bcomb/combiner.hpp"
#include "bcomb/environments.hpp"

namespace bcomb {
namespace {

using nlohmann::json;

std::size_t arm_count(const EnvConfig& env) { return env.type == "karmed" ? env.means.size() : env.arms; }

/// Balances the 288 log_term T eta and 1/eta terms of the target formula.
double default_eta(std::size_t horizon, std::size_t n_bases, double delta) {
  return std::min(1.0, 1.0 / std::sqrt(288.0 * log_term(horizon, n_bases, delta) * static_cast<double>(horizon)));
}

const char* mode_name(TargetMode m) {
  switch (m) {
    case TargetMode::kChecked: return "checked";
    case TargetMode::kGap: return "gap";
    case TargetMode::kUnchecked: return "unchecked";
  }
  return "unchecked";
}

/// Everything needed to replay one policy for one replication.
struct Policy {
  std::string name;
  enum class Kind { kCombiner, kAlone, kAdversarial } kind = Kind::kAlone;
  std::vector<BaseFactory> factories;  ///< combiner bases, or the single base
  std::vector<std::uint64_t> slots;    ///< random stream slot per factory
  CombinerConfig combiner;
  AdvConfig adversarial;
};

RegretTrace play(const Policy& p, const EnvFactory& env_factory, std::uint64_t seed, std::size_t rep,
                 std::size_t horizon) {
  const std::uint64_t stream = static_cast<std::uint64_t>(rep) * kStreamsPerRep;
  Rng instance_rng = fork_rng(seed, stream + kSlotEnvInstance);
  Rng noise_rng = fork_rng(seed, stream + kSlotEnvNoise);
  auto env = env_factory(instance_rng);
  switch (p.kind) {
    case Policy::Kind::kCombiner: {
      std::vector<std::unique_ptr<BaseAlgorithm>> bases;
      bases.reserve(p.factories.size());
      for (std::size_t i = 0; i < p.factories.size(); ++i)
        bases.push_back(p.factories[i](fork_rng(seed, stream + p.slots[i])));
      return run_combiner(*env, bases, p.combiner, noise_rng);
    }
    case Policy::Kind::kAlone: {
      auto base = p.factories.front()(fork_rng(seed, stream + p.slots.front()));
      return run_alone(*env, *base, horizon, noise_rng);
    }
    case Policy::Kind::kAdversarial:
      return run_adversarial(*env, p.adversarial, noise_rng);
  }
  throw std::logic_error("unknown policy kind");
}

std::string sanitize(const std::string& name) {
  std::string out = name;
  for (char& c : out)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) c = '_';
  return out;
}

}  // namespace

EnvFactory make_env_factory(const EnvConfig& e) {
  if (e.type == "karmed") {
    return [e](Rng&) -> std::unique_ptr<Environment> {
      KArmedNoise noise{e.noise == "bernoulli" ? NoiseKind::kBernoulli : NoiseKind::kGaussian, e.sigma};
      return make_karmed_env(e.means, noise);
    };
  }
  if (e.type == "misspecified") {
    return [e](Rng& rng) -> std::unique_ptr<Environment> {
      return make_misspecified_env(e.arms, e.dim, e.alpha_mix, e.sigma, rng);
    };
  }
  if (e.type == "model_selection") {
    return [e](Rng& rng) -> std::unique_ptr<Environment> {
      return make_model_selection_env(e.arms, e.dim, e.dim_star, e.sigma, rng);
    };
  }
  if (e.type == "adversarial_linear") {
    return [e](Rng& rng) -> std::unique_ptr<Environment> {
      Eigen::VectorXd theta;
      if (e.theta_star.empty()) {
        theta = sample_unit_sphere(e.dim_star, rng);
      } else {
        theta = Eigen::Map<const Eigen::VectorXd>(e.theta_star.data(), static_cast<Eigen::Index>(e.theta_star.size()));
      }
      const auto schedule = e.schedule == "rotating" ? FeatureSchedule::kRotating : FeatureSchedule::kSpherical;
      const auto noise = e.noise == "uniform" ? BoundedNoise::kUniform : BoundedNoise::kRademacher;
      return make_adversarial_linear_env(e.dim, std::move(theta), e.arms, schedule, noise, e.noise_scale);
    };
  }
  throw ConfigError("unknown environment type '" + e.type + "'");
}

BaseFactory make_base_factory(const BaseConfig& b, const EnvConfig& env, std::size_t horizon, double delta) {
  const std::size_t K = arm_count(env);
  if (b.type == "fixed") {
    if (b.arm >= K) throw ConfigError("fixed base arm out of range");
    const Action arm = b.arm;
    return [arm](Rng) { return make_fixed_arm(arm); };
  }
  if (b.type == "ucb") {
    const std::size_t arms = b.arms.empty() ? K : b.arms.size();
    const double conf = b.conf_scale.value_or(ucb_default_conf_scale(horizon, arms, delta));
    if (b.arms.empty()) return [K, conf](Rng) { return make_ucb(K, conf); };
    for (auto a : b.arms)
      if (a >= K) throw ConfigError("ucb base arm subset out of range");
    const std::vector<std::size_t> subset = b.arms;
    return [subset, conf](Rng) { return make_restricted_ucb(subset, conf); };
  }
  if (b.type == "linucb") {
    if (env.type == "karmed") throw ConfigError("linucb bases need a feature environment");
    const std::size_t d = b.dim == 0 ? env.dim : b.dim;
    if (d > env.dim) throw ConfigError("linucb base dim exceeds the feature dimension");
    const double beta =
        b.beta.value_or(linucb_default_beta(d, horizon, b.lambda, delta, env.noise_sigma(), env.theta_norm()));
    const double lambda = b.lambda;
    return [d, lambda, beta](Rng) { return make_restricted_linucb(d, lambda, beta); };
  }
  throw ConfigError("unknown base type '" + b.type + "'");
}

const PolicyResult& ExperimentResult::policy(const std::string& name) const {
  for (const auto& p : policies)
    if (p.name == name) return p;
  throw std::out_of_range("no policy named '" + name + "'");
}

double ExperimentResult::mean_final_regret(const std::string& name) const {
  const auto& p = policy(name);
  double sum = 0.0;
  for (const auto& r : p.reps) sum += r.final_regret();
  return sum / static_cast<double>(p.reps.size());
}

std::string library_version() { return BCOMB_VERSION; }

std::string config_hash(const ExperimentConfig& cfg) { return fnv1a_hex(to_json(cfg).dump()); }

ExperimentResult run_experiment(const ExperimentConfig& input) {
  // Round-trip through the parser so programmatic configs get the same checks.
  const ExperimentConfig cfg = parse_experiment_config(to_json(input));
  const std::size_t T = cfg.horizon;
  const std::size_t N = cfg.bases.size();
  ExperimentResult result;

  std::vector<std::string> names;
  for (const auto& b : cfg.bases) names.push_back(sanitize(base_display_name(b)));
  std::vector<std::string> baseline_names;
  for (const auto& b : cfg.baselines) baseline_names.push_back(sanitize(base_display_name(b)));
  {
    std::set<std::string> seen{"combiner"};
    for (const auto& n : names)
      if (!seen.insert(n).second) throw ConfigError("duplicate policy name '" + n + "'");
    for (const auto& n : baseline_names)
      if (!seen.insert(n).second) throw ConfigError("duplicate policy name '" + n + "'");
  }

  // Putative bounds, calibrated on independent instances where requested.
  const bool adversarial = cfg.kind == ExperimentKind::kAdversarial;
  for (std::size_t i = 0; i < N; ++i) {
    const BaseConfig& b = cfg.bases[i];
    PutativeBound bound{0.0, b.alpha};
    if (b.calibrate) {
      const EnvConfig calib_env = merge_env(cfg.env, b.calibration_env);
      const std::uint64_t calib_seed = cfg.seed ^ (kCalibrationOffset * (i + 1));
      CalibrationResult cal = calibrate_putative_bound(make_base_factory(b, calib_env, T, cfg.delta),
                                                       make_env_factory(calib_env), T, b.alpha,
                                                       cfg.calibration_replications, calib_seed, names[i]);
      bound.C = cal.C;
      result.calibration.push_back(std::move(cal));
    } else if (b.C) {
      bound.C = *b.C;
    } else if (adversarial) {
      const std::size_t d = b.dim == 0 ? cfg.env.dim : b.dim;
      bound = default_adversarial_bound(d, T, b.lambda, beta_scale(T, d, b.lambda, cfg.delta, cfg.flags.literal_beta));
      bound.alpha = 0.5;
    } else if (!cfg.flags.doubling) {
      throw ConfigError("base '" + names[i] + "' needs C or calibrate=true");
    }
    result.bounds.push_back(bound);
  }

  std::vector<BaseFactory> factories;
  for (const auto& b : cfg.bases) factories.push_back(make_base_factory(b, cfg.env, T, cfg.delta));

  std::vector<Policy> policies;
  Policy combiner;
  combiner.name = "combiner";
  json target_info;

  if (adversarial) {
    combiner.kind = Policy::Kind::kAdversarial;
    AdvConfig& ac = combiner.adversarial;
    ac.horizon = T;
    ac.delta = cfg.delta;
    ac.lambda = cfg.bases.front().lambda;
    ac.literal_beta = cfg.flags.literal_beta;
    for (const auto& b : cfg.bases) {
      if (b.lambda != ac.lambda) throw ConfigError("adversarial bases must share one lambda");
      ac.dims.push_back(b.dim == 0 ? cfg.env.dim : b.dim);
    }
    ac.bounds = result.bounds;
    if (cfg.targets == TargetRule::kExplicit) {
      for (const auto& b : cfg.bases) ac.targets.push_back(*b.R);
    } else if (cfg.targets == TargetRule::kExperiment) {
      ac.targets = target_regrets_experiment(ac.bounds, T);
    } else {
      ac.targets.assign(N, 0.0);
    }
    try {
      ac.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    result.targets = ac.targets;
    target_info = {{"mode", cfg.targets == TargetRule::kGap ? "gap" : "unchecked"}};
    policies.push_back(combiner);
    if (cfg.bases_alone) {
      for (std::size_t i = 0; i < N; ++i) {
        Policy p;
        p.name = names[i];
        p.kind = Policy::Kind::kAdversarial;
        p.adversarial = ac;
        p.adversarial.dims = {ac.dims[i]};
        p.adversarial.bounds = {ac.bounds[i]};
        p.adversarial.targets = {0.0};
        policies.push_back(std::move(p));
      }
    }
  } else {
    combiner.kind = Policy::Kind::kCombiner;
    CombinerConfig& cc = combiner.combiner;
    cc.horizon = T;
    cc.delta = cfg.delta;
    cc.literal_threshold = cfg.flags.literal_threshold;
    cc.clamp_rewards = cfg.flags.clamp_rewards;

    EtaPrior prior;
    std::vector<BaseFactory> expanded;
    std::vector<std::size_t> origin;
    if (cfg.flags.doubling) {
      const double eta0 = default_eta(T, N, cfg.delta);
      for (const auto& b : cfg.bases) prior.etas.push_back(b.eta.value_or(eta0));
      const auto grid = build_doubling_grid(N, T, cfg.delta, prior);
      EtaPrior cell_prior;
      for (const auto& cell : grid) {
        cc.bounds.push_back({cell.C, cell.alpha});
        cell_prior.etas.push_back(cell.eta);
        expanded.push_back(factories[cell.original]);
        origin.push_back(cell.original);
      }
      prior = cell_prior;
    } else {
      cc.bounds = result.bounds;
      expanded = factories;
      origin.resize(N);
      std::iota(origin.begin(), origin.end(), std::size_t{0});
      const double eta0 = default_eta(T, N, cfg.delta);
      for (const auto& b : cfg.bases) prior.etas.push_back(b.eta.value_or(eta0));
    }
    if (expanded.size() + kSlotBase >= kStreamsPerRep / 2)
      throw ConfigError("too many combiner bases for the random stream layout");

    switch (cfg.targets) {
      case TargetRule::kEta:
        cc.targets = target_regrets_from_eta(cc.bounds, prior, T, cfg.delta);
        cc.mode = cfg.flags.doubling ? TargetMode::kUnchecked : TargetMode::kChecked;
        break;
      case TargetRule::kExperiment:
        cc.targets = target_regrets_experiment(cc.bounds, T);
        cc.mode = TargetMode::kUnchecked;
        break;
      case TargetRule::kGap:
        cc.targets.assign(cc.bounds.size(), 0.0);
        cc.mode = TargetMode::kGap;
        break;
      case TargetRule::kExplicit:
        for (std::size_t k = 0; k < cc.bounds.size(); ++k) cc.targets.push_back(*cfg.bases[origin[k]].R);
        cc.mode = TargetMode::kUnchecked;
        break;
    }
    try {
      cc.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    if (cc.mode == TargetMode::kChecked && !check_target_regret_conditions(cc))
      throw ConfigError("target regrets fail the feasibility conditions");
    result.targets = cc.targets;
    target_info = {{"mode", mode_name(cc.mode)}, {"etas", prior.etas}};

    combiner.factories = expanded;
    for (std::size_t k = 0; k < expanded.size(); ++k) combiner.slots.push_back(kSlotBase + k);
    policies.push_back(combiner);
    if (cfg.bases_alone) {
      for (std::size_t i = 0; i < N; ++i) {
        Policy p;
        p.name = names[i];
        p.kind = Policy::Kind::kAlone;
        p.factories = {factories[i]};
        p.slots = {kSlotBase + i};
        policies.push_back(std::move(p));
      }
    }
  }

  for (std::size_t j = 0; j < cfg.baselines.size(); ++j) {
    const BaseConfig& b = cfg.baselines[j];
    Policy p;
    p.name = baseline_names[j];
    if (adversarial) {
      p.kind = Policy::Kind::kAdversarial;
      p.adversarial = combiner.adversarial;
      const std::size_t d = b.dim == 0 ? cfg.env.dim : b.dim;
      p.adversarial.dims = {d};
      p.adversarial.bounds = {b.C ? PutativeBound{*b.C, b.alpha}
                                  : default_adversarial_bound(
                                        d, T, p.adversarial.lambda,
                                        beta_scale(T, d, p.adversarial.lambda, cfg.delta, cfg.flags.literal_beta))};
      p.adversarial.targets = {0.0};
    } else {
      p.kind = Policy::Kind::kAlone;
      p.factories = {make_base_factory(b, cfg.env, T, cfg.delta)};
      p.slots = {kStreamsPerRep / 2 + j};
    }
    policies.push_back(std::move(p));
  }

  // Replications across a worker pool; results land in replication order.
  const EnvFactory env_factory = make_env_factory(cfg.env);
  const std::size_t reps = cfg.replications;
  std::vector<std::vector<RegretTrace>> traces(policies.size(), std::vector<RegretTrace>(reps));
  std::size_t workers = cfg.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : cfg.threads;
  workers = std::min(workers, reps);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&]() {
    for (;;) {
      const std::size_t r = next.fetch_add(1);
      if (r >= reps) return;
      try {
        for (std::size_t p = 0; p < policies.size(); ++p)
          traces[p][r] = play(policies[p], env_factory, cfg.seed, r, T);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(reps);
        return;
      }
    }
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  for (std::size_t p = 0; p < policies.size(); ++p)
    result.policies.push_back(PolicyResult{policies[p].name, std::move(traces[p])});

  // Metadata sidecar.
  Rng probe = fork_rng(cfg.seed, kSlotEnvInstance);
  json policies_meta = json::array();
  for (const auto& pr : result.policies) {
    json fallbacks = json::array();
    json eliminations = json::array();
    for (const auto& tr : pr.reps) {
      fallbacks.push_back(tr.fallback_count);
      json el = json::array();
      for (const auto& e : tr.eliminations) el.push_back({e.base, e.t});
      eliminations.push_back(el);
    }
    policies_meta.push_back({{"name", pr.name},
                             {"mean_final_regret", result.mean_final_regret(pr.name)},
                             {"fallback_count", fallbacks},
                             {"eliminations", eliminations}});
  }
  json bounds = json::array();
  for (const auto& b : result.bounds) bounds.push_back({{"C", b.C}, {"alpha", b.alpha}});
  json calibration = json::array();
  for (const auto& c : result.calibration)
    calibration.push_back({{"base", c.base}, {"C", c.C}, {"alpha", c.alpha}, {"per_rep", c.per_rep}});
  target_info["R"] = result.targets;
  result.metadata = {{"library_version", library_version()},
                     {"config_hash", config_hash(cfg)},
                     {"seed", cfg.seed},
                     {"replications", reps},
                     {"horizon", T},
                     {"delta", cfg.delta},
                     {"config", to_json(cfg)},
                     {"environment_rep0", env_factory(probe)->describe()},
                     {"bounds", bounds},
                     {"targets", target_info},
                     {"calibration", calibration},
                     {"policies", policies_meta}};
  return result;
}

void write_experiment(const ExperimentResult& result, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + dir + "': " + ec.message());
  const fs::path root(dir);
  for (const auto& p : result.policies) write_trace_csv((root / ("trace_" + p.name + ".csv")).string(), p.reps);

  std::ofstream summary(root / "summary.csv", std::ios::binary);
  if (!summary) throw std::runtime_error("cannot write summary.csv in '" + dir + "'");
  summary << kSummaryHeader << '\n';
  for (const auto& p : result.policies)
    for (const auto& row : summarize(p.reps))
      summary << p.name << ',' << row.t << ',' << format_double(row.mean) << ',' << format_double(row.std) << '\n';
  if (!summary) throw std::runtime_error("write failed for summary.csv");

  std::ofstream meta(root / "metadata.json", std::ios::binary);
  if (!meta) throw std::runtime_error("cannot write metadata.json in '" + dir + "'");
  meta << result.metadata.dump(2) << '\n';
}

}  // namespace bcomb
