#pragma once

// Combiner for linear bandits with adversarially chosen feature maps. Every
// base is a linUCB learner over a coordinate prefix of the revealed features;
// bases are dropped when their optimism gap statistic drifts upward or their
// accumulated exploration bonus exceeds the claimed regret envelope.

#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "bcomb/bases.hpp"
#include "bcomb/core.hpp"

namespace bcomb {

/// sqrt(4160 ln((T log2(sqrt(T / ln(T/delta))) + 2) / delta) + 6 lambda + 16 d ln(1 + T/lambda)).
/// With `literal` set the expression itself is returned, without the root.
double beta_scale(std::size_t horizon, std::size_t dim, double lambda, double delta, bool literal = false);

/// C = 2 beta sqrt(d ln(1 + 2T/lambda)), alpha = 1/2: the bonus budget of a
/// lone linUCB learner never exceeds C sqrt(t).
PutativeBound default_adversarial_bound(std::size_t dim, std::size_t horizon, double lambda, double beta);

struct AdvConfig {
  std::vector<std::size_t> dims;
  std::vector<PutativeBound> bounds;
  std::vector<double> targets;
  std::size_t horizon = 1;
  double delta = 0.05;
  double lambda = 2.0;
  bool literal_beta = false;

  std::size_t n_bases() const { return dims.size(); }
  void validate() const;
  /// Fills bounds with default_adversarial_bound and zero targets where unset.
  static AdvConfig with_defaults(std::vector<std::size_t> dims, std::size_t horizon, double delta,
                                 double lambda = 2.0);
};

struct AdvBaseState {
  LinUcbState learner;
  std::size_t count = 0;
  double z_sum = 0.0;
  /// sum of 2 beta sqrt(a^T M^{-1} a) over this base's plays
  double bonus_sum = 0.0;
  bool active = true;
};

struct EllipsoidState {
  std::vector<AdvBaseState> bases;
  std::size_t fallback_count = 0;

  explicit EllipsoidState(const AdvConfig& cfg);
  std::size_t active_count() const;
  void deactivate(std::size_t i);
};

/// max_a <a, mu_hat> + beta sqrt(a^T M^{-1} a) over the rows, minus R / T.
double adv_ucb_index(const LinUcbState& learner, const Eigen::Ref<const Eigen::MatrixXd>& features, double target,
                     std::size_t horizon);

/// <a, mu_hat> - r_hat - beta sqrt(a^T M^{-1} a), evaluated before the update.
double z_statistic(const LinUcbState& before, const Eigen::Ref<const Eigen::VectorXd>& a, double r_hat);

/// z_sum > 2 sqrt(t ln(T/delta)) or bonus_sum > C t^alpha with t = count.
bool adv_elimination_test(const AdvBaseState& base, const PutativeBound& bound, std::size_t horizon, double delta);

/// Called after every update with the round, the chosen base index and its
/// post-update state.
using AdvObserver = std::function<void(std::size_t t, std::size_t chosen, const AdvBaseState& base)>;

RegretTrace run_adversarial(const Environment& env, const AdvConfig& cfg, Rng& env_rng,
                            const AdvObserver& observer = {});

}  // namespace bcomb
