#include <cmath>

#include "bcomb/harness/experiment.hpp"

namespace bcomb {
namespace {

// A small ridge keeps the sqrt(lambda) * |theta| term of the linUCB radius
// from dominating on the stochastic linear presets.
constexpr double kStochasticLambda = 0.1;

ExperimentConfig misspecified(double alpha_mix) {
  if (!(alpha_mix == 0.0 || alpha_mix == 1.0)) throw ConfigError("misspecified preset: alpha_mix must be 0 or 1");
  ExperimentConfig c;
  c.kind = ExperimentKind::kMisspecified;
  c.env.type = "misspecified";
  c.env.arms = 50;
  c.env.dim = 10;
  c.env.sigma = 0.1;
  c.env.alpha_mix = alpha_mix;
  c.horizon = 20000;
  c.delta = 0.05;
  c.seed = 1;
  c.replications = 20;
  c.calibration_replications = 5;
  c.targets = TargetRule::kExperiment;

  BaseConfig ucb;
  ucb.name = "ucb";
  ucb.type = "ucb";
  ucb.calibrate = true;
  ucb.calibration_env = {{"alpha_mix", 1.0}};
  BaseConfig lin;
  lin.name = "linucb";
  lin.type = "linucb";
  lin.lambda = kStochasticLambda;
  lin.calibrate = true;
  lin.calibration_env = {{"alpha_mix", 0.0}};
  c.bases = {ucb, lin};
  return c;
}

ExperimentConfig model_selection() {
  ExperimentConfig c;
  c.kind = ExperimentKind::kModelSelection;
  c.env.type = "model_selection";
  c.env.arms = 1000;
  c.env.dim = 128;
  c.env.dim_star = 8;
  c.env.sigma = 0.1;
  c.horizon = 20000;
  c.delta = 0.05;
  c.seed = 1;
  c.replications = 10;
  c.calibration_replications = 3;
  c.targets = TargetRule::kExperiment;
  c.bases_alone = false;
  for (std::size_t d = 2; d <= c.env.dim; d *= 2) {
    BaseConfig b;
    b.name = "linucb_d" + std::to_string(d);
    b.type = "linucb";
    b.dim = d;
    b.lambda = kStochasticLambda;
    b.calibrate = true;
    b.calibration_env = {{"dim_star", d}};
    c.bases.push_back(b);
  }
  BaseConfig baseline;
  baseline.name = "baseline";
  baseline.type = "linucb";
  baseline.lambda = kStochasticLambda;
  BaseConfig oracle;
  oracle.name = "oracle";
  oracle.type = "linucb";
  oracle.lambda = kStochasticLambda;
  oracle.dim = c.env.dim_star;
  c.baselines = {baseline, oracle};
  return c;
}

ExperimentConfig karmed() {
  ExperimentConfig c;
  c.kind = ExperimentKind::kKArmed;
  c.env.type = "karmed";
  c.env.noise = "bernoulli";
  c.env.means.assign(20, 0.5);
  c.env.means[0] = 0.8;
  c.horizon = 10000;
  c.delta = 0.05;
  c.seed = 1;
  c.replications = 200;
  c.calibration_replications = 20;
  c.targets = TargetRule::kEta;

  BaseConfig restricted;
  restricted.name = "ucb_suboptimal";
  restricted.type = "ucb";
  for (std::size_t a = 1; a < c.env.means.size(); ++a) restricted.arms.push_back(a);
  restricted.calibrate = true;
  BaseConfig full;
  full.name = "ucb";
  full.type = "ucb";
  full.calibrate = true;
  c.bases = {restricted, full};
  return c;
}

ExperimentConfig gap() {
  ExperimentConfig c;
  c.kind = ExperimentKind::kKArmed;
  c.env.type = "karmed";
  c.env.noise = "bernoulli";
  // Arms 0-4, 5-9 and 10-14 form the three subsets; only the middle one
  // holds the optimum (arm 5, mean 0.9); the other subsets top out at 0.7.
  c.env.means = {0.7, 0.5, 0.4, 0.3, 0.2, 0.9, 0.6, 0.5, 0.4, 0.3, 0.7, 0.6, 0.5, 0.3, 0.1};
  c.horizon = 50000;
  c.delta = 0.05;
  c.seed = 1;
  c.replications = 20;
  c.targets = TargetRule::kGap;
  for (std::size_t i = 0; i < 3; ++i) {
    BaseConfig b;
    b.name = "ucb_subset" + std::to_string(i);
    b.type = "ucb";
    for (std::size_t a = 5 * i; a < 5 * i + 5; ++a) b.arms.push_back(a);
    b.C = std::sqrt(5.0 * std::log(static_cast<double>(c.horizon)));
    b.alpha = 0.5;
    c.bases.push_back(b);
  }
  return c;
}

}  // namespace

ExperimentConfig preset_config(const std::string& name, double alpha_mix) {
  if (name == "misspecified") return misspecified(alpha_mix);
  if (name == "modelselection") return model_selection();
  if (name == "karmed") return karmed();
  if (name == "gap") return gap();
  throw ConfigError("unknown preset '" + name + "'");
}

std::vector<std::string> preset_names() { return {"misspecified", "modelselection", "karmed", "gap"}; }

}  // namespace bcomb
