#include <cmath>
#include <random>
#include <stdexcept>

#include "bcomb/environments.hpp"

namespace bcomb {

Eigen::VectorXd sample_unit_sphere(std::size_t dim, Rng& rng) {
  if (dim == 0) throw std::invalid_argument("sphere: dimension must be >= 1");
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(static_cast<Eigen::Index>(dim));
  double norm = 0.0;
  do {
    for (Eigen::Index j = 0; j < v.size(); ++j) v(j) = normal(rng);
    norm = v.norm();
  } while (norm == 0.0);
  return v / norm;
}

Eigen::MatrixXd sample_sphere_rows(std::size_t rows, std::size_t dim, Rng& rng) {
  Eigen::MatrixXd X(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(dim));
  for (Eigen::Index k = 0; k < X.rows(); ++k) X.row(k) = sample_unit_sphere(dim, rng).transpose();
  return X;
}

// ------------------------------------------------------- FixedFeatureEnv

FixedFeatureEnv::FixedFeatureEnv(Eigen::MatrixXd features, Eigen::VectorXd beta, double sigma)
    : features_(std::make_shared<const Eigen::MatrixXd>(std::move(features))), beta_(std::move(beta)), sigma_(sigma) {
  if (features_->rows() < 1) throw std::invalid_argument("linear env: at least one arm is required");
  if (features_->cols() != beta_.size()) throw std::invalid_argument("linear env: parameter dimension mismatch");
  if (!(sigma_ >= 0.0)) throw std::invalid_argument("linear env: sigma must be >= 0");
}

void FixedFeatureEnv::set_expected(Eigen::VectorXd expected) {
  expected_ = std::move(expected);
  Eigen::Index best = 0;
  expected_.maxCoeff(&best);
  best_ = static_cast<std::size_t>(best);
}

Context FixedFeatureEnv::draw_context(Rng&) const {
  return Context{static_cast<std::size_t>(features_->rows()), features_};
}

double FixedFeatureEnv::reward(const Context& context, Action action, Rng& rng) const {
  return expected_reward(context, action) + sigma_ * std::normal_distribution<double>(0.0, 1.0)(rng);
}

double FixedFeatureEnv::expected_reward(const Context&, Action action) const {
  if (static_cast<Eigen::Index>(action) >= expected_.size()) throw std::out_of_range("linear env: invalid arm");
  return expected_(static_cast<Eigen::Index>(action));
}

double FixedFeatureEnv::optimal_expected_reward(const Context&) const {
  return expected_(static_cast<Eigen::Index>(best_));
}

// ------------------------------------------------- MisspecifiedLinearEnv

MisspecifiedLinearEnv::MisspecifiedLinearEnv(Eigen::MatrixXd features, Eigen::VectorXd beta, double alpha_mix,
                                             double sigma, std::size_t rejections)
    : FixedFeatureEnv(std::move(features), std::move(beta), sigma), alpha_mix_(alpha_mix), rejections_(rejections) {
  if (features_->rows() < 2) throw std::invalid_argument("misspecified env: K must be >= 2");
  if (!(alpha_mix >= 0.0 && alpha_mix <= 1.0)) throw std::invalid_argument("misspecified env: alpha_mix in [0, 1]");
  const double root_d = std::sqrt(static_cast<double>(features_->cols()));
  const Eigen::VectorXd linear = *features_ * beta_;
  Eigen::Index worst = 0;
  linear.minCoeff(&worst);
  a_star_ = static_cast<std::size_t>(worst);
  offsets_ = 0.25 * root_d * linear;
  offsets_(worst) = 1.0;
  set_expected(alpha_mix_ * offsets_ + (1.0 - alpha_mix_) * root_d * linear);
}

nlohmann::json MisspecifiedLinearEnv::describe() const {
  return {{"type", "misspecified"},
          {"arms", features_->rows()},
          {"dim", features_->cols()},
          {"alpha_mix", alpha_mix_},
          {"sigma", sigma_},
          {"worst_linear_arm", a_star_},
          {"best_arm", best_},
          {"rejections", rejections_}};
}

std::unique_ptr<MisspecifiedLinearEnv> make_misspecified_env(std::size_t K, std::size_t d, double alpha_mix,
                                                             double sigma, Rng& rng) {
  if (K < 2 || d < 1) throw std::invalid_argument("misspecified env: need K >= 2 and d >= 1");
  if (!(sigma >= 0.0)) throw std::invalid_argument("misspecified env: sigma must be >= 0");
  constexpr std::size_t kMaxRejections = 100000;
  for (std::size_t rejections = 0; rejections <= kMaxRejections; ++rejections) {
    Eigen::MatrixXd X = sample_sphere_rows(K, d, rng);
    Eigen::VectorXd beta = sample_unit_sphere(d, rng);
    auto env = std::make_unique<MisspecifiedLinearEnv>(std::move(X), std::move(beta), alpha_mix, sigma, rejections);
    if (alpha_mix < 1.0) return env;
    const Eigen::VectorXd& mean = env->expected();
    const auto a_star = static_cast<Eigen::Index>(env->worst_linear_arm());
    bool strict = true;
    for (Eigen::Index a = 0; a < mean.size(); ++a)
      if (a != a_star && mean(a) >= mean(a_star)) strict = false;
    if (strict) return env;
  }
  throw std::runtime_error("misspecified env: could not draw an instance with a strictly optimal a*");
}

// ----------------------------------------------------- ModelSelectionEnv

ModelSelectionEnv::ModelSelectionEnv(Eigen::MatrixXd features, Eigen::VectorXd beta, std::size_t d_star, double sigma)
    : FixedFeatureEnv(std::move(features), std::move(beta), sigma), d_star_(d_star) {
  set_expected(*features_ * beta_);
}

nlohmann::json ModelSelectionEnv::describe() const {
  return {{"type", "model_selection"},
          {"arms", features_->rows()},
          {"dim", features_->cols()},
          {"dim_star", d_star_},
          {"sigma", sigma_},
          {"best_arm", best_}};
}

std::unique_ptr<ModelSelectionEnv> make_model_selection_env(std::size_t K, std::size_t d, std::size_t d_star,
                                                            double sigma, Rng& rng) {
  if (K < 1 || d < 1) throw std::invalid_argument("model selection env: need K >= 1 and d >= 1");
  if (d_star < 1 || d_star > d) throw std::invalid_argument("model selection env: need 1 <= d_star <= d");
  Eigen::MatrixXd X = sample_sphere_rows(K, d, rng);
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
  beta.head(static_cast<Eigen::Index>(d_star)) = sample_unit_sphere(d_star, rng);
  return std::make_unique<ModelSelectionEnv>(std::move(X), std::move(beta), d_star, sigma);
}

}  // namespace bcomb
