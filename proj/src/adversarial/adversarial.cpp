#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "bcomb/adversarial.hpp"

namespace bcomb {

double beta_scale(std::size_t horizon, std::size_t dim, double lambda, double delta, bool literal) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("beta_scale: delta must lie in (0, 1)");
  if (horizon < 2) throw std::invalid_argument("beta_scale: horizon must be >= 2");
  if (!(lambda > 0.0)) throw std::invalid_argument("beta_scale: lambda must be > 0");
  const double T = static_cast<double>(horizon);
  const double d = static_cast<double>(dim);
  const double inner = std::log2(std::sqrt(T / std::log(T / delta)));
  const double expression =
      4160.0 * std::log((T * inner + 2.0) / delta) + 6.0 * lambda + 16.0 * d * std::log(1.0 + T / lambda);
  return literal ? expression : std::sqrt(expression);
}

PutativeBound default_adversarial_bound(std::size_t dim, std::size_t horizon, double lambda, double beta) {
  const double d = static_cast<double>(dim);
  const double T = static_cast<double>(horizon);
  return {2.0 * beta * std::sqrt(d * std::log(1.0 + 2.0 * T / lambda)), 0.5};
}

void AdvConfig::validate() const {
  if (dims.empty()) throw std::invalid_argument("adversarial: at least one base is required");
  if (bounds.size() != dims.size() || targets.size() != dims.size())
    throw std::invalid_argument("adversarial: dims, bounds and targets differ in length");
  if (horizon < 2) throw std::invalid_argument("adversarial: horizon must be >= 2");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("adversarial: delta must lie in (0, 1)");
  if (!(lambda >= 2.0)) throw std::invalid_argument("adversarial: lambda must be >= 2");
  for (std::size_t d : dims)
    if (d == 0) throw std::invalid_argument("adversarial: every dimension must be >= 1");
  for (const auto& b : bounds) b.validate();
  for (double r : targets)
    if (!(r >= 0.0)) throw std::invalid_argument("adversarial: targets must be >= 0");
}

AdvConfig AdvConfig::with_defaults(std::vector<std::size_t> dims, std::size_t horizon, double delta, double lambda) {
  AdvConfig cfg;
  cfg.dims = std::move(dims);
  cfg.horizon = horizon;
  cfg.delta = delta;
  cfg.lambda = lambda;
  for (std::size_t d : cfg.dims) {
    cfg.bounds.push_back(default_adversarial_bound(d, horizon, lambda, beta_scale(horizon, d, lambda, delta)));
    cfg.targets.push_back(0.0);
  }
  return cfg;
}

EllipsoidState::EllipsoidState(const AdvConfig& cfg) {
  bases.reserve(cfg.n_bases());
  for (std::size_t d : cfg.dims) {
    const double beta = beta_scale(cfg.horizon, d, cfg.lambda, cfg.delta, cfg.literal_beta);
    bases.push_back(AdvBaseState{LinUcbState(d, cfg.lambda, beta)});
  }
}

std::size_t EllipsoidState::active_count() const {
  return static_cast<std::size_t>(
      std::count_if(bases.begin(), bases.end(), [](const AdvBaseState& b) { return b.active; }));
}

void EllipsoidState::deactivate(std::size_t i) {
  bases[i].active = false;
  if (active_count() == 0) {
    for (auto& b : bases) b.active = true;
    ++fallback_count;
  }
}

double adv_ucb_index(const LinUcbState& learner, const Eigen::Ref<const Eigen::MatrixXd>& features, double target,
                     std::size_t horizon) {
  const std::size_t best = linucb_select(learner, features);
  return learner.optimistic_value(features.row(static_cast<Eigen::Index>(best)).transpose()) -
         target / static_cast<double>(horizon);
}

double z_statistic(const LinUcbState& before, const Eigen::Ref<const Eigen::VectorXd>& a, double r_hat) {
  return a.dot(before.mu_hat()) - r_hat - before.beta() * before.width(a);
}

bool adv_elimination_test(const AdvBaseState& base, const PutativeBound& bound, std::size_t horizon, double delta) {
  if (base.count == 0) return false;
  const double t = static_cast<double>(base.count);
  const double z_limit = 2.0 * std::sqrt(t * std::log(static_cast<double>(horizon) / delta));
  return base.z_sum > z_limit || base.bonus_sum > bound.at(t);
}

RegretTrace run_adversarial(const Environment& env, const AdvConfig& cfg, Rng& env_rng, const AdvObserver& observer) {
  if (cfg.horizon == 0) return {};
  cfg.validate();
  EllipsoidState state(cfg);
  RegretTrace trace;
  trace.rows.reserve(cfg.horizon);

  for (std::size_t t = 1; t <= cfg.horizon; ++t) {
    const Context context = env.draw_context(env_rng);
    if (!context.features) throw std::invalid_argument("run_adversarial: context carries no features");
    const Eigen::MatrixXd& X = *context.features;

    std::size_t chosen = cfg.n_bases();
    double best_index = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < cfg.n_bases(); ++i) {
      if (!state.bases[i].active) continue;
      if (static_cast<std::size_t>(X.cols()) < cfg.dims[i])
        throw std::invalid_argument("run_adversarial: context dimension below a base dimension");
      const double u = adv_ucb_index(state.bases[i].learner, X.leftCols(static_cast<Eigen::Index>(cfg.dims[i])),
                                     cfg.targets[i], cfg.horizon);
      if (chosen == cfg.n_bases() || u > best_index) {
        best_index = u;
        chosen = i;
      }
    }

    AdvBaseState& base = state.bases[chosen];
    const auto Xi = X.leftCols(static_cast<Eigen::Index>(cfg.dims[chosen]));
    const Action action = linucb_select(base.learner, Xi);
    const Eigen::VectorXd a = Xi.row(static_cast<Eigen::Index>(action)).transpose();
    const double observed = env.reward(context, action, env_rng);

    const double z = z_statistic(base.learner, a, observed);
    const double bonus = 2.0 * base.learner.beta() * base.learner.width(a);
    base.learner.update(a, observed);
    ++base.count;
    base.z_sum += z;
    base.bonus_sum += bonus;
    if (observer) observer(t, chosen, base);
    if (adv_elimination_test(base, cfg.bounds[chosen], cfg.horizon, cfg.delta)) {
      state.deactivate(chosen);
      trace.eliminations.push_back({chosen, t});
    }
    accumulate_regret(trace, env.optimal_expected_reward(context), env.expected_reward(context, action), chosen,
                      state.active_count());
  }
  trace.fallback_count = state.fallback_count;
  return trace;
}

}  // namespace bcomb
