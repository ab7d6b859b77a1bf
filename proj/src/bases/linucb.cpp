#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "bcomb/bases.hpp"

namespace bcomb {

LinUcbState::LinUcbState(std::size_t dim, double lambda, double beta, std::size_t refresh_every)
    : dim_(dim), lambda_(lambda), beta_(beta), refresh_every_(std::max<std::size_t>(refresh_every, 1)) {
  if (dim == 0) throw std::invalid_argument("linucb: dimension must be >= 1");
  if (!(lambda > 0.0)) throw std::invalid_argument("linucb: lambda must be > 0");
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw std::invalid_argument("linucb: beta must be finite and >= 0");
  reset();
}

void LinUcbState::reset() {
  const auto d = static_cast<Eigen::Index>(dim_);
  M_ = lambda_ * Eigen::MatrixXd::Identity(d, d);
  M_inv_ = Eigen::MatrixXd::Identity(d, d) / lambda_;
  b_ = Eigen::VectorXd::Zero(d);
  mu_hat_ = Eigen::VectorXd::Zero(d);
  updates_ = 0;
}

double LinUcbState::width(const Eigen::Ref<const Eigen::VectorXd>& a) const {
  return std::sqrt(std::max(0.0, a.dot(M_inv_ * a)));
}

double LinUcbState::optimistic_value(const Eigen::Ref<const Eigen::VectorXd>& a) const {
  return a.dot(mu_hat_) + beta_ * width(a);
}

bool LinUcbState::update(const Eigen::Ref<const Eigen::VectorXd>& a, double y) {
  if (static_cast<std::size_t>(a.size()) != dim_) throw std::invalid_argument("ridge_update: dimension mismatch");
  if (!a.allFinite() || !std::isfinite(y)) throw std::invalid_argument("ridge_update: non-finite input");
  if (a.norm() > 1.0 + 1e-9) throw std::invalid_argument("ridge_update: feature norm exceeds 1");

  M_.noalias() += a * a.transpose();
  b_ += y * a;
  ++updates_;

  if (updates_ % refresh_every_ == 0) {
    refresh();
    return true;
  }
  const Eigen::VectorXd u = M_inv_ * a;
  M_inv_.noalias() -= (u * u.transpose()) / (1.0 + a.dot(u));
  mu_hat_.noalias() = M_inv_ * b_;
  return false;
}

void LinUcbState::refresh() {
  const Eigen::LLT<Eigen::MatrixXd> llt(M_);
  if (llt.info() != Eigen::Success) throw std::runtime_error("linucb: covariance lost positive definiteness");
  const auto d = static_cast<Eigen::Index>(dim_);
  M_inv_ = llt.solve(Eigen::MatrixXd::Identity(d, d));
  mu_hat_ = llt.solve(b_);
}

std::size_t linucb_select(const LinUcbState& state, const Eigen::Ref<const Eigen::MatrixXd>& features) {
  if (features.rows() == 0) throw std::invalid_argument("linucb_select: no actions");
  if (static_cast<std::size_t>(features.cols()) != state.dim())
    throw std::invalid_argument("linucb_select: dimension mismatch");
  std::size_t best = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < features.rows(); ++k) {
    const double value = state.optimistic_value(features.row(k).transpose());
    if (value > best_value) {
      best_value = value;
      best = static_cast<std::size_t>(k);
    }
  }
  return best;
}

void ridge_update(LinUcbState& state, const Eigen::Ref<const Eigen::VectorXd>& a, double y) { state.update(a, y); }

double linucb_default_beta(std::size_t dim, std::size_t horizon, double lambda, double delta, double sigma,
                           double theta_norm) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("linucb: delta must lie in (0, 1)");
  const double d = static_cast<double>(dim);
  const double t = static_cast<double>(horizon);
  return sigma * std::sqrt(2.0 * std::log(1.0 / delta) + d * std::log(1.0 + t / (lambda * d))) +
         std::sqrt(lambda) * theta_norm;
}

namespace {

auto prefix_features(const Context& context, std::size_t d_hat) {
  if (!context.features) throw std::invalid_argument("linucb: context carries no features");
  if (context.dim() < d_hat) throw std::invalid_argument("linucb: context dimension below d_hat");
  return context.features->leftCols(static_cast<Eigen::Index>(d_hat));
}

// linUCB over the first d_hat coordinates. When consecutive contexts share
// the same feature matrix, per-action quadratic forms a^T M^{-1} a are kept
// current with the rank-one update and rebuilt after each exact refresh.
class PrefixLinUcb final : public BaseAlgorithm {
 public:
  PrefixLinUcb(std::size_t d_hat, double lambda, double beta, std::size_t refresh_every)
      : d_hat_(d_hat), state_(d_hat, lambda, beta, refresh_every) {}

  Action propose(const Context& context) override {
    const auto X = prefix_features(context, d_hat_);
    if (cached_ != context.features) rebuild_cache(context);
    const Eigen::VectorXd estimate = X * state_.mu_hat();
    std::size_t best = 0;
    double best_value = -std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < X.rows(); ++k) {
      const double value = estimate(k) + state_.beta() * std::sqrt(std::max(0.0, quad_(k)));
      if (value > best_value) {
        best_value = value;
        best = static_cast<std::size_t>(k);
      }
    }
    return best;
  }

  void feedback(const Context& context, Action action, double reward) override {
    const auto X = prefix_features(context, d_hat_);
    if (static_cast<Eigen::Index>(action) >= X.rows()) throw std::out_of_range("linucb: invalid action");
    const Eigen::VectorXd a = X.row(static_cast<Eigen::Index>(action)).transpose();
    if (cached_ == context.features) {
      const Eigen::VectorXd u = state_.M_inv() * a;
      const double denom = 1.0 + a.dot(u);
      const Eigen::VectorXd proj = X * u;
      quad_.array() -= proj.array().square() / denom;
    } else {
      cached_.reset();
    }
    if (state_.update(a, reward)) cached_.reset();
  }

  void reset() override {
    state_.reset();
    cached_.reset();
  }

  std::string name() const override { return "linucb[" + std::to_string(d_hat_) + "]"; }

 private:
  void rebuild_cache(const Context& context) {
    const auto X = prefix_features(context, d_hat_);
    quad_ = (X * state_.M_inv()).cwiseProduct(X).rowwise().sum();
    cached_ = context.features;
  }

  std::size_t d_hat_;
  LinUcbState state_;
  std::shared_ptr<const Eigen::MatrixXd> cached_;
  Eigen::VectorXd quad_;
};

}  // namespace

std::unique_ptr<BaseAlgorithm> make_restricted_linucb(std::size_t d_hat, double lambda, double beta,
                                                      std::size_t refresh_every) {
  if (d_hat == 0) throw std::invalid_argument("restricted linucb: d_hat must be >= 1");
  return std::make_unique<PrefixLinUcb>(d_hat, lambda, beta, refresh_every);
}

}  // namespace bcomb
