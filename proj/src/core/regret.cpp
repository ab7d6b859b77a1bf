#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bcomb/core.hpp"

namespace bcomb {

void PutativeBound::validate() const {
  if (!(C >= 0.0) || !std::isfinite(C)) throw std::invalid_argument("putative bound: C must be finite and >= 0");
  if (!(alpha >= 0.5 && alpha <= 1.0)) throw std::invalid_argument("putative bound: alpha must lie in [0.5, 1]");
}

double PutativeBound::at(double t) const { return C * std::pow(t, alpha); }

bool RegretTrace::eliminated(std::size_t base) const {
  return std::any_of(eliminations.begin(), eliminations.end(),
                     [base](const Elimination& e) { return e.base == base; });
}

void accumulate_regret(RegretTrace& trace, double r_star_t, double r_t, std::size_t chosen,
                       std::size_t active) {
  RegretRow row;
  row.t = trace.rows.size() + 1;
  row.chosen = chosen;
  row.inst_regret = r_star_t - r_t;
  row.cum_regret = (trace.rows.empty() ? 0.0 : trace.rows.back().cum_regret) + row.inst_regret;
  row.active_count = active;
  trace.rows.push_back(row);
}

RegretTrace run_alone(const Environment& env, BaseAlgorithm& base, std::size_t horizon, Rng& env_rng) {
  RegretTrace trace;
  trace.rows.reserve(horizon);
  for (std::size_t t = 0; t < horizon; ++t) {
    const Context context = env.draw_context(env_rng);
    const Action action = base.propose(context);
    const double observed = env.reward(context, action, env_rng);
    base.feedback(context, action, observed);
    accumulate_regret(trace, env.optimal_expected_reward(context), env.expected_reward(context, action), 0, 1);
  }
  return trace;
}

}  // namespace bcomb
