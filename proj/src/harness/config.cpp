#include "bcomb/harness/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <string_view>

namespace bcomb {
namespace {

using nlohmann::json;

void require_object(const json& j, std::string_view where) {
  if (!j.is_object()) throw ConfigError(std::string(where) + ": expected an object");
}

void check_keys(const json& j, std::initializer_list<std::string_view> allowed, std::string_view where) {
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ConfigError(std::string(where) + ": unknown key '" + key + "'");
  }
}

template <typename T>
void read(const json& j, const char* key, T& out, std::string_view where) {
  auto it = j.find(key);
  if (it == j.end()) return;
  try {
    out = it->template get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string(where) + "." + key + ": " + e.what());
  }
}

template <typename T>
void read_opt(const json& j, const char* key, std::optional<T>& out, std::string_view where) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return;
  T value{};
  read(j, key, value, where);
  out = value;
}

void read_count(const json& j, const char* key, std::size_t& out, std::string_view where) {
  auto it = j.find(key);
  if (it == j.end()) return;
  if (!it->is_number_integer() || it->get<long long>() < 0)
    throw ConfigError(std::string(where) + "." + key + ": expected a non-negative integer");
  out = it->get<std::size_t>();
}

void validate_env(const EnvConfig& e) {
  static const std::vector<std::string> kTypes{"misspecified", "model_selection", "karmed", "adversarial_linear"};
  if (std::find(kTypes.begin(), kTypes.end(), e.type) == kTypes.end())
    throw ConfigError("environment.type: unknown type '" + e.type + "'");
  if (!(e.sigma >= 0.0) || !std::isfinite(e.sigma)) throw ConfigError("environment.sigma must be >= 0");
  if (e.type == "misspecified") {
    if (e.arms < 2 || e.dim < 1) throw ConfigError("environment: misspecified needs arms >= 2 and dim >= 1");
    if (!(e.alpha_mix >= 0.0 && e.alpha_mix <= 1.0)) throw ConfigError("environment.alpha_mix must lie in [0, 1]");
  } else if (e.type == "model_selection") {
    if (e.arms < 1 || e.dim < 1) throw ConfigError("environment: model_selection needs arms >= 1 and dim >= 1");
    if (e.dim_star < 1 || e.dim_star > e.dim) throw ConfigError("environment: need 1 <= dim_star <= dim");
  } else if (e.type == "karmed") {
    if (e.means.empty()) throw ConfigError("environment.means must be non-empty");
    if (e.noise != "gaussian" && e.noise != "bernoulli")
      throw ConfigError("environment.noise must be gaussian or bernoulli for karmed");
    for (double m : e.means) {
      if (!std::isfinite(m)) throw ConfigError("environment.means must be finite");
      if (e.noise == "bernoulli" && (m < 0.0 || m > 1.0))
        throw ConfigError("environment.means must lie in [0, 1] with bernoulli noise");
    }
  } else {
    if (e.arms < 1 || e.dim < 1) throw ConfigError("environment: adversarial_linear needs arms >= 1 and dim >= 1");
    if (e.noise != "rademacher" && e.noise != "uniform")
      throw ConfigError("environment.noise must be rademacher or uniform for adversarial_linear");
    if (e.schedule != "spherical" && e.schedule != "rotating")
      throw ConfigError("environment.schedule must be spherical or rotating");
    if (e.dim_star < 1 || e.dim_star > e.dim) throw ConfigError("environment: need 1 <= dim_star <= dim");
    if (!e.theta_star.empty() && e.theta_star.size() != e.dim_star)
      throw ConfigError("environment.theta_star must have dim_star entries");
    double sq = 0.0;
    for (double v : e.theta_star) sq += v * v;
    if (std::sqrt(sq) > 1.0 + 1e-12) throw ConfigError("environment.theta_star must have norm <= 1");
    if (!(e.noise_scale >= 0.0 && e.noise_scale <= 1.0))
      throw ConfigError("environment.noise_scale must lie in [0, 1]");
  }
}

void validate_base(const BaseConfig& b, std::string_view where) {
  const std::string w(where);
  if (b.type != "ucb" && b.type != "linucb" && b.type != "fixed")
    throw ConfigError(w + ".type: unknown base type '" + b.type + "'");
  if (!(b.alpha >= 0.5 && b.alpha <= 1.0)) throw ConfigError(w + ".alpha must lie in [0.5, 1]");
  if (b.C && !(*b.C >= 0.0 && std::isfinite(*b.C))) throw ConfigError(w + ".C must be finite and >= 0");
  if (b.eta && !(*b.eta > 0.0 && *b.eta <= 1.0)) throw ConfigError(w + ".eta must lie in (0, 1]");
  if (b.R && !(*b.R >= 0.0 && std::isfinite(*b.R))) throw ConfigError(w + ".R must be finite and >= 0");
  if (!(b.lambda > 0.0)) throw ConfigError(w + ".lambda must be > 0");
  if (b.conf_scale && !(*b.conf_scale >= 0.0)) throw ConfigError(w + ".conf_scale must be >= 0");
  if (b.beta && !(*b.beta >= 0.0)) throw ConfigError(w + ".beta must be >= 0");
  if (b.type == "ucb" && !b.arms.empty()) {
    std::vector<std::size_t> sorted = b.arms;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw ConfigError(w + ".arms must not repeat");
  }
  if (!b.calibration_env.is_object()) throw ConfigError(w + ".calibration_env must be an object");
}

std::size_t env_arms(const EnvConfig& e) { return e.type == "karmed" ? e.means.size() : e.arms; }

const char* kind_name(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::kMisspecified: return "misspecified";
    case ExperimentKind::kModelSelection: return "model_selection";
    case ExperimentKind::kKArmed: return "karmed";
    case ExperimentKind::kAdversarial: return "adversarial";
    case ExperimentKind::kCustom: return "custom";
  }
  return "custom";
}

const char* target_name(TargetRule r) {
  switch (r) {
    case TargetRule::kEta: return "eta";
    case TargetRule::kExperiment: return "experiment";
    case TargetRule::kGap: return "gap";
    case TargetRule::kExplicit: return "explicit";
  }
  return "eta";
}

}  // namespace

double EnvConfig::noise_sigma() const {
  if (type == "karmed") return noise == "bernoulli" ? 1.0 : sigma;
  if (type == "adversarial_linear") return 1.0;
  return sigma;
}

double EnvConfig::theta_norm() const {
  if (type == "misspecified") return std::sqrt(static_cast<double>(dim));
  return 1.0;
}

EnvConfig parse_env_config(const json& j) {
  constexpr std::string_view w = "environment";
  require_object(j, w);
  check_keys(j,
             {"type", "arms", "dim", "dim_star", "alpha_mix", "sigma", "means", "noise", "noise_scale", "theta_star",
              "schedule"},
             w);
  EnvConfig e;
  read(j, "type", e.type, w);
  if (e.type == "adversarial_linear") e.noise = "rademacher";
  read_count(j, "arms", e.arms, w);
  read_count(j, "dim", e.dim, w);
  read_count(j, "dim_star", e.dim_star, w);
  read(j, "alpha_mix", e.alpha_mix, w);
  read(j, "sigma", e.sigma, w);
  read(j, "means", e.means, w);
  read(j, "noise", e.noise, w);
  read(j, "noise_scale", e.noise_scale, w);
  read(j, "theta_star", e.theta_star, w);
  read(j, "schedule", e.schedule, w);
  validate_env(e);
  return e;
}

BaseConfig parse_base_config(const json& j) {
  constexpr std::string_view w = "base";
  require_object(j, w);
  check_keys(j,
             {"name", "type", "arms", "arm", "dim", "lambda", "conf_scale", "beta", "C", "alpha", "eta", "R",
              "calibrate", "calibration_env"},
             w);
  BaseConfig b;
  read(j, "name", b.name, w);
  read(j, "type", b.type, w);
  read(j, "arms", b.arms, w);
  read_count(j, "arm", b.arm, w);
  read_count(j, "dim", b.dim, w);
  read(j, "lambda", b.lambda, w);
  read_opt(j, "conf_scale", b.conf_scale, w);
  read_opt(j, "beta", b.beta, w);
  read_opt(j, "C", b.C, w);
  read(j, "alpha", b.alpha, w);
  read_opt(j, "eta", b.eta, w);
  read_opt(j, "R", b.R, w);
  read(j, "calibrate", b.calibrate, w);
  if (auto it = j.find("calibration_env"); it != j.end()) b.calibration_env = *it;
  validate_base(b, w);
  return b;
}

ExperimentConfig parse_experiment_config(const json& j) {
  constexpr std::string_view w = "config";
  require_object(j, w);
  check_keys(j,
             {"kind", "horizon", "delta", "seed", "replications", "threads", "targets", "calibration_replications",
              "bases_alone", "environment", "bases", "baselines", "flags"},
             w);
  ExperimentConfig c;
  std::string kind = "custom";
  read(j, "kind", kind, w);
  if (kind == "misspecified") c.kind = ExperimentKind::kMisspecified;
  else if (kind == "model_selection") c.kind = ExperimentKind::kModelSelection;
  else if (kind == "karmed") c.kind = ExperimentKind::kKArmed;
  else if (kind == "adversarial") c.kind = ExperimentKind::kAdversarial;
  else if (kind == "custom") c.kind = ExperimentKind::kCustom;
  else throw ConfigError("config.kind: unknown kind '" + kind + "'");

  std::string targets = "eta";
  read(j, "targets", targets, w);
  if (targets == "eta") c.targets = TargetRule::kEta;
  else if (targets == "experiment") c.targets = TargetRule::kExperiment;
  else if (targets == "gap") c.targets = TargetRule::kGap;
  else if (targets == "explicit") c.targets = TargetRule::kExplicit;
  else throw ConfigError("config.targets: unknown rule '" + targets + "'");

  read_count(j, "horizon", c.horizon, w);
  read(j, "delta", c.delta, w);
  if (auto it = j.find("seed"); it != j.end()) {
    if (!it->is_number_unsigned() && !(it->is_number_integer() && it->get<long long>() >= 0))
      throw ConfigError("config.seed: expected a non-negative integer");
    c.seed = it->get<std::uint64_t>();
  }
  read_count(j, "replications", c.replications, w);
  read_count(j, "threads", c.threads, w);
  read_count(j, "calibration_replications", c.calibration_replications, w);
  read(j, "bases_alone", c.bases_alone, w);

  if (auto it = j.find("environment"); it != j.end()) c.env = parse_env_config(*it);
  else throw ConfigError("config.environment is required");

  for (const char* key : {"bases", "baselines"}) {
    auto it = j.find(key);
    if (it == j.end()) continue;
    if (!it->is_array()) throw ConfigError(std::string("config.") + key + ": expected an array");
    auto& out = std::string_view(key) == "bases" ? c.bases : c.baselines;
    for (const auto& item : *it) out.push_back(parse_base_config(item));
  }

  if (auto it = j.find("flags"); it != j.end()) {
    require_object(*it, "flags");
    check_keys(*it, {"clamp_rewards", "literal_threshold", "literal_beta", "doubling"}, "flags");
    read(*it, "clamp_rewards", c.flags.clamp_rewards, "flags");
    read(*it, "literal_threshold", c.flags.literal_threshold, "flags");
    read(*it, "literal_beta", c.flags.literal_beta, "flags");
    read(*it, "doubling", c.flags.doubling, "flags");
  }

  if (c.horizon < 1) throw ConfigError("config.horizon must be >= 1");
  if (!(c.delta > 0.0 && c.delta < 1.0)) throw ConfigError("config.delta must lie in (0, 1)");
  if (c.replications < 1) throw ConfigError("config.replications must be >= 1");
  if (c.calibration_replications < 1) throw ConfigError("config.calibration_replications must be >= 1");
  if (c.bases.empty()) throw ConfigError("config.bases must list at least one base");

  const std::size_t arms = env_arms(c.env);
  const bool featured = c.env.type != "karmed";
  auto check_fit = [&](const BaseConfig& b) {
    if (b.type == "linucb" && !featured) throw ConfigError("linucb bases need a feature environment");
    if (b.type == "linucb" && b.dim > c.env.dim) throw ConfigError("linucb base dim exceeds the feature dimension");
    if (b.type == "fixed" && b.arm >= arms) throw ConfigError("fixed base arm out of range");
    if (b.type == "ucb")
      for (auto a : b.arms)
        if (a >= arms) throw ConfigError("ucb base arm subset out of range");
  };
  for (const auto& b : c.bases) check_fit(b);
  for (const auto& b : c.baselines) check_fit(b);

  if (c.kind == ExperimentKind::kAdversarial) {
    if (c.env.type != "adversarial_linear") throw ConfigError("adversarial experiments need adversarial_linear");
    for (const auto& b : c.bases)
      if (b.type != "linucb") throw ConfigError("adversarial experiments only take linucb bases");
    if (c.targets == TargetRule::kEta) c.targets = TargetRule::kGap;
    if (c.flags.doubling) throw ConfigError("the doubling wrapper applies to the stochastic combiner only");
  }
  if (c.targets == TargetRule::kExplicit)
    for (const auto& b : c.bases)
      if (!b.R) throw ConfigError("targets=explicit needs R on every base");
  return c;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError("config parse error: " + std::string(e.what()));
  }
  return parse_experiment_config(j);
}

json to_json(const EnvConfig& e) {
  json j{{"type", e.type}, {"sigma", e.sigma}};
  if (e.type == "karmed") {
    j["means"] = e.means;
    j["noise"] = e.noise;
    return j;
  }
  j["arms"] = e.arms;
  j["dim"] = e.dim;
  if (e.type == "misspecified") j["alpha_mix"] = e.alpha_mix;
  if (e.type == "model_selection") j["dim_star"] = e.dim_star;
  if (e.type == "adversarial_linear") {
    j.erase("sigma");
    j["dim_star"] = e.dim_star;
    j["noise"] = e.noise;
    j["noise_scale"] = e.noise_scale;
    j["schedule"] = e.schedule;
    if (!e.theta_star.empty()) j["theta_star"] = e.theta_star;
  }
  return j;
}

json to_json(const BaseConfig& b) {
  json j{{"type", b.type}, {"alpha", b.alpha}};
  if (!b.name.empty()) j["name"] = b.name;
  if (b.type == "ucb" && !b.arms.empty()) j["arms"] = b.arms;
  if (b.type == "fixed") j["arm"] = b.arm;
  if (b.type == "linucb") {
    j["dim"] = b.dim;
    j["lambda"] = b.lambda;
  }
  if (b.conf_scale) j["conf_scale"] = *b.conf_scale;
  if (b.beta) j["beta"] = *b.beta;
  if (b.C) j["C"] = *b.C;
  if (b.eta) j["eta"] = *b.eta;
  if (b.R) j["R"] = *b.R;
  if (b.calibrate) j["calibrate"] = true;
  if (!b.calibration_env.empty()) j["calibration_env"] = b.calibration_env;
  return j;
}

json to_json(const ExperimentConfig& c) {
  json bases = json::array();
  for (const auto& b : c.bases) bases.push_back(to_json(b));
  json baselines = json::array();
  for (const auto& b : c.baselines) baselines.push_back(to_json(b));
  return {{"kind", kind_name(c.kind)},
          {"horizon", c.horizon},
          {"delta", c.delta},
          {"seed", c.seed},
          {"replications", c.replications},
          {"threads", c.threads},
          {"targets", target_name(c.targets)},
          {"calibration_replications", c.calibration_replications},
          {"bases_alone", c.bases_alone},
          {"environment", to_json(c.env)},
          {"bases", bases},
          {"baselines", baselines},
          {"flags",
           {{"clamp_rewards", c.flags.clamp_rewards},
            {"literal_threshold", c.flags.literal_threshold},
            {"literal_beta", c.flags.literal_beta},
            {"doubling", c.flags.doubling}}}};
}

EnvConfig merge_env(const EnvConfig& env, const json& overrides) {
  if (!overrides.is_object()) throw ConfigError("environment overrides must be an object");
  json j = to_json(env);
  if (overrides.contains("type") && overrides["type"] != j["type"]) j = json::object();
  for (const auto& [key, value] : overrides.items()) j[key] = value;
  return parse_env_config(j);
}

std::string base_display_name(const BaseConfig& b) {
  if (!b.name.empty()) return b.name;
  if (b.type == "ucb") return b.arms.empty() ? "ucb" : "ucb_subset" + std::to_string(b.arms.size());
  if (b.type == "fixed") return "fixed" + std::to_string(b.arm);
  return b.dim == 0 ? "linucb" : "linucb_d" + std::to_string(b.dim);
}

}  // namespace bcomb
