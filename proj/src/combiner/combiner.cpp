#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "bcomb/combiner.hpp"

namespace bcomb {

void CombinerConfig::validate() const {
  if (bounds.empty()) throw std::invalid_argument("combiner: at least one base is required");
  if (targets.size() != bounds.size()) throw std::invalid_argument("combiner: targets and bounds differ in length");
  if (horizon < 1) throw std::invalid_argument("combiner: horizon must be >= 1");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("combiner: delta must lie in (0, 1)");
  for (const auto& b : bounds) b.validate();
  for (double r : targets)
    if (!(r >= 0.0) || !std::isfinite(r)) throw std::invalid_argument("combiner: targets must be finite and >= 0");
  if (mode == TargetMode::kGap &&
      std::any_of(targets.begin(), targets.end(), [](double r) { return r != 0.0; }))
    throw std::invalid_argument("combiner: gap mode requires every R_i = 0");
}

double log_term(std::size_t horizon, std::size_t n_bases, double delta) {
  const double t = static_cast<double>(horizon);
  return 3.0 * std::log(t) + std::log(static_cast<double>(n_bases)) - std::log(delta);
}

CombinerState::CombinerState(std::size_t n_bases)
    : counts(n_bases, 0), means(n_bases, 0.0), drift(n_bases, 0.0), active(n_bases, true) {}

std::size_t CombinerState::active_count() const {
  return static_cast<std::size_t>(std::count(active.begin(), active.end(), true));
}

void CombinerState::deactivate(std::size_t i) {
  active[i] = false;
  if (active_count() == 0) {
    std::fill(active.begin(), active.end(), true);
    ++fallback_count;
  }
}

double ucb_index(std::size_t i, const CombinerState& state, const CombinerConfig& cfg) {
  const double shift = cfg.targets[i] / static_cast<double>(cfg.horizon);
  const std::size_t count = state.counts[i];
  if (count == 0) return 1.0 - shift;
  const double n = static_cast<double>(count);
  const double L = log_term(cfg.horizon, cfg.n_bases(), cfg.delta);
  const double width = (cfg.bounds[i].at(n) + std::sqrt(8.0 * L * n)) / n;
  return state.means[i] + std::min(1.0, width) - shift;
}

std::size_t select_base(const CombinerState& state, const CombinerConfig& cfg) {
  std::size_t best = state.n_bases();
  double best_index = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < state.n_bases(); ++i) {
    if (!state.active[i]) continue;
    const double u = ucb_index(i, state, cfg);
    if (best == state.n_bases() || u > best_index) {
      best_index = u;
      best = i;
    }
  }
  if (best == state.n_bases()) throw std::logic_error("select_base: empty active set");
  return best;
}

void record_feedback(CombinerState& state, std::size_t i, double r_hat) {
  state.drift[i] += state.means[i] - r_hat;
  const double n = static_cast<double>(++state.counts[i]);
  state.means[i] += (r_hat - state.means[i]) / n;
  ++state.round;
}

double elimination_threshold(std::size_t i, const CombinerState& state, const CombinerConfig& cfg) {
  const double n = static_cast<double>(state.counts[i]);
  const double L = log_term(cfg.horizon, cfg.n_bases(), cfg.delta);
  const double scale = cfg.literal_threshold ? 1.0 : 8.0;
  return cfg.bounds[i].at(n) + 3.0 * std::sqrt(scale * L * n);
}

bool elimination_test(const CombinerState& state, std::size_t i, const CombinerConfig& cfg) {
  if (state.counts[i] == 0) return false;
  return state.drift[i] >= elimination_threshold(i, state, cfg);
}

RegretTrace run_combiner(const Environment& env, std::vector<std::unique_ptr<BaseAlgorithm>>& bases,
                         const CombinerConfig& cfg, Rng& env_rng) {
  if (cfg.horizon == 0) return {};
  cfg.validate();
  if (bases.size() != cfg.n_bases()) throw std::invalid_argument("run_combiner: base count differs from config");
  if (cfg.mode == TargetMode::kChecked && !check_target_regret_conditions(cfg))
    throw std::invalid_argument("run_combiner: target regrets violate the feasibility conditions");

  CombinerState state(cfg.n_bases());
  RegretTrace trace;
  trace.rows.reserve(cfg.horizon);
  for (std::size_t t = 1; t <= cfg.horizon; ++t) {
    const std::size_t i = select_base(state, cfg);
    const Context context = env.draw_context(env_rng);
    const Action action = bases[i]->propose(context);
    const double observed = env.reward(context, action, env_rng);
    bases[i]->feedback(context, action, observed);

    const double r_hat = cfg.clamp_rewards ? std::clamp(observed, 0.0, 1.0) : observed;
    record_feedback(state, i, r_hat);
    if (elimination_test(state, i, cfg)) {
      state.deactivate(i);
      trace.eliminations.push_back({i, t});
    }
    accumulate_regret(trace, env.optimal_expected_reward(context), env.expected_reward(context, action), i,
                      state.active_count());
  }
  trace.fallback_count = state.fallback_count;
  return trace;
}

}  // namespace bcomb
