#pragma once

// Base bandit learners: K-armed UCB (optionally over an arm subset),
// ridge-regression linUCB (optionally over a coordinate prefix), and
// constant fixed-arm players.

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bcomb/core.hpp"

namespace bcomb {

// ---------------------------------------------------------------- UCB

struct UcbState {
  std::vector<std::size_t> counts;
  std::vector<double> means;
  double conf_scale = 1.0;

  UcbState(std::size_t arms, double conf_scale);
  std::size_t arms() const { return counts.size(); }
};

/// sigma * sqrt(2 ln(2 T K / delta)); sigma is the noise sub-Gaussian scale
/// (1 for rewards in [0, 1]).
double ucb_default_conf_scale(std::size_t horizon, std::size_t arms, double delta, double sigma = 1.0);

/// argmax of means[a] + conf_scale / sqrt(counts[a]); unpulled arms first,
/// ties to the lowest index.
std::size_t ucb_select(const UcbState& state);
void ucb_update(UcbState& state, std::size_t arm, double reward);

// ------------------------------------------------------------- linUCB

/// Regularized least-squares state: M = lambda I + sum a a^T, b = sum y a,
/// mu_hat = M^{-1} b. M^{-1} is kept by Sherman-Morrison updates and
/// recomputed from a Cholesky factorization every `refresh_every` updates.
class LinUcbState {
 public:
  LinUcbState(std::size_t dim, double lambda, double beta, std::size_t refresh_every = 64);

  std::size_t dim() const { return dim_; }
  double lambda() const { return lambda_; }
  double beta() const { return beta_; }
  std::size_t updates() const { return updates_; }
  std::size_t refresh_every() const { return refresh_every_; }

  const Eigen::MatrixXd& M() const { return M_; }
  const Eigen::MatrixXd& M_inv() const { return M_inv_; }
  const Eigen::VectorXd& b() const { return b_; }
  const Eigen::VectorXd& mu_hat() const { return mu_hat_; }

  /// sqrt(a^T M^{-1} a)
  double width(const Eigen::Ref<const Eigen::VectorXd>& a) const;
  /// <a, mu_hat> + beta * width(a)
  double optimistic_value(const Eigen::Ref<const Eigen::VectorXd>& a) const;

  /// Returns true when the update ended with an exact refresh.
  bool update(const Eigen::Ref<const Eigen::VectorXd>& a, double y);
  void reset();

 private:
  void refresh();

  std::size_t dim_;
  double lambda_;
  double beta_;
  std::size_t refresh_every_;
  std::size_t updates_ = 0;
  Eigen::MatrixXd M_;
  Eigen::MatrixXd M_inv_;
  Eigen::VectorXd b_;
  Eigen::VectorXd mu_hat_;
};

/// argmax over rows a of <a, mu_hat> + beta sqrt(a^T M^{-1} a); ties to the
/// lowest row.
std::size_t linucb_select(const LinUcbState& state, const Eigen::Ref<const Eigen::MatrixXd>& features);
void ridge_update(LinUcbState& state, const Eigen::Ref<const Eigen::VectorXd>& a, double y);

/// Confidence radius for a stochastic linear model with sigma-sub-Gaussian
/// noise and ||theta|| <= theta_norm (self-normalized bound, unit features):
/// sigma sqrt(2 ln(1/delta) + d ln(1 + T/(lambda d))) + sqrt(lambda) theta_norm.
double linucb_default_beta(std::size_t dim, std::size_t horizon, double lambda, double delta, double sigma,
                           double theta_norm);

// ----------------------------------------------------------- factories

std::unique_ptr<BaseAlgorithm> make_ucb(std::size_t arms, double conf_scale);
std::unique_ptr<BaseAlgorithm> make_restricted_ucb(std::vector<std::size_t> arm_subset, double conf_scale);
std::unique_ptr<BaseAlgorithm> make_fixed_arm(Action arm);
/// linUCB on the first d_hat feature coordinates.
std::unique_ptr<BaseAlgorithm> make_restricted_linucb(std::size_t d_hat, double lambda, double beta,
                                                      std::size_t refresh_every = 64);

}  // namespace bcomb
