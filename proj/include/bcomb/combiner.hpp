#pragma once

// Stochastic Bandit Combiner: a UCB over base learners with confidence
// intervals shifted down by R_i / T and a drift test that permanently
// removes bases whose putative regret bound is contradicted.

#include <cstddef>
#include <memory>
#include <vector>

#include "bcomb/core.hpp"

namespace bcomb {

/// How the target regrets R_i were produced.
enum class TargetMode {
  kChecked,    ///< R_i must satisfy the feasibility conditions; run() verifies.
  kGap,        ///< All R_i = 0, feasibility is not required.
  kUnchecked,  ///< Experiment override such as (C_i^2 + N) sqrt(T).
};

struct CombinerConfig {
  std::vector<PutativeBound> bounds;
  std::vector<double> targets;
  std::size_t horizon = 1;
  double delta = 0.05;
  TargetMode mode = TargetMode::kChecked;
  /// Use 3 sqrt(log_term n) in the elimination threshold instead of
  /// 3 sqrt(8 log_term n).
  bool literal_threshold = false;
  /// Clamp observed rewards to [0, 1] before they reach the combiner.
  bool clamp_rewards = false;

  std::size_t n_bases() const { return bounds.size(); }
  void validate() const;
};

/// ln(T^3 N / delta)
double log_term(std::size_t horizon, std::size_t n_bases, double delta);

class CombinerState {
 public:
  explicit CombinerState(std::size_t n_bases);

  std::size_t n_bases() const { return counts.size(); }
  std::size_t active_count() const;
  bool is_active(std::size_t i) const { return active[i]; }
  void deactivate(std::size_t i);

  std::vector<std::size_t> counts;
  std::vector<double> means;
  /// Running sum over plays of (mean before the play) - (reward of the play).
  std::vector<double> drift;
  std::vector<bool> active;
  std::size_t round = 0;
  std::size_t fallback_count = 0;
};

/// mu_i + min(1, (C_i n^alpha_i + sqrt(8 log_term n)) / n) - R_i / T, with the
/// min-term equal to 1 when n = 0.
double ucb_index(std::size_t i, const CombinerState& state, const CombinerConfig& cfg);

/// argmax of ucb_index over the active set; ties go to the lowest index.
std::size_t select_base(const CombinerState& state, const CombinerConfig& cfg);

/// Updates drift (using the pre-update mean), count, and mean of base i.
void record_feedback(CombinerState& state, std::size_t i, double r_hat);

/// C_i n^alpha_i + 3 sqrt(8 log_term n) (or 3 sqrt(log_term n) when literal).
double elimination_threshold(std::size_t i, const CombinerState& state, const CombinerConfig& cfg);
bool elimination_test(const CombinerState& state, std::size_t i, const CombinerConfig& cfg);

/// Full loop. Each round: select a base, draw the context, play the base's
/// proposal, feed the reward back to that base only, update statistics and
/// run the elimination test. If the active set empties, every base is
/// reinstated and the trace's fallback counter increments.
RegretTrace run_combiner(const Environment& env, std::vector<std::unique_ptr<BaseAlgorithm>>& bases,
                         const CombinerConfig& cfg, Rng& env_rng);

// ------------------------------------------------------- target regrets

struct EtaPrior {
  std::vector<double> etas;
};

/// R_i = C_i T^a + k(a) C_i^{1/a} T eta_i^{(1-a)/a} + 288 log_term T eta_i + sum_{k != i} 1/eta_k
/// with k(a) = (1-a)^{(1-a)/a} (1+a)^{1/a} / a^{(1-a)/a}; a = 1 uses 0^0 = 1.
std::vector<double> target_regrets_from_eta(const std::vector<PutativeBound>& bounds, const EtaPrior& prior,
                                            std::size_t horizon, double delta);

/// R_i = (C_i^2 + N) sqrt(T).
std::vector<double> target_regrets_experiment(const std::vector<PutativeBound>& bounds, std::size_t horizon);

/// R_i >= C_i T^{alpha_i} and
/// R_i >= sum_{k != i} max(F_k, 288 log_term T / R_k), where
/// F_k = (1-a)(1+a)^{1/(1-a)} (2 C_k)^{1/(1-a)} T^{a/(1-a)} / (a R_k^{a/(1-a)}), a = alpha_k.
/// F_k is skipped when alpha_k = 1.
bool check_target_regret_conditions(const CombinerConfig& cfg);

/// sup_{Z >= 0} A Z^alpha - B Z = alpha^{alpha/(1-alpha)} (1-alpha) A^{1/(1-alpha)} / B^{alpha/(1-alpha)}
double alphabound_sup(double A, double B, double alpha);

// ---------------------------------------------------------- doubling grid

struct DoublingCell {
  std::size_t original = 0;
  std::size_t x = 0;  ///< duplicate index, 1..M
  std::size_t y = 0;  ///< C = 2^y, y in 1..K
  std::size_t z = 0;  ///< alpha = min(1, 1/2 + z / log2 T), z in 1..L
  double C = 0.0;
  double alpha = 0.5;
  double eta = 1.0;
};

struct GridShape {
  std::size_t M = 0;
  std::size_t K = 0;
  std::size_t L = 0;
};

/// M = ceil(log2(1/delta)), K = ceil(log2 T), L = ceil(log2(T) / 2).
GridShape doubling_grid_shape(std::size_t horizon, double delta);
std::vector<DoublingCell> build_doubling_grid(std::size_t n_originals, std::size_t horizon, double delta,
                                              const EtaPrior& prior);

}  // namespace bcomb
