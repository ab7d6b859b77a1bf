#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "bcomb/environments.hpp"

namespace bcomb {

AdversarialLinearEnv::AdversarialLinearEnv(std::size_t d, Eigen::VectorXd theta_star, std::size_t action_count,
                                           FeatureSchedule schedule, BoundedNoise noise, double noise_scale)
    : d_(d),
      theta_(std::move(theta_star)),
      action_count_(action_count),
      schedule_(schedule),
      noise_(noise),
      noise_scale_(noise_scale) {
  if (d_ == 0 || action_count_ == 0) throw std::invalid_argument("adversarial env: need d >= 1 and actions >= 1");
  if (theta_.size() < 1 || static_cast<std::size_t>(theta_.size()) > d_)
    throw std::invalid_argument("adversarial env: theta_star length must lie in [1, d]");
  if (!theta_.allFinite() || theta_.norm() > 1.0 + 1e-12)
    throw std::invalid_argument("adversarial env: ||theta_star|| must be <= 1");
  if (!(noise_scale_ >= 0.0 && noise_scale_ <= 1.0))
    throw std::invalid_argument("adversarial env: noise scale must lie in [0, 1]");
}

Context AdversarialLinearEnv::draw_context(Rng& rng) const {
  Eigen::MatrixXd X;
  if (schedule_ == FeatureSchedule::kSpherical) {
    X = sample_sphere_rows(action_count_, d_, rng);
  } else {
    X = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(action_count_), static_cast<Eigen::Index>(d_));
    for (std::size_t k = 0; k < action_count_; ++k)
      X(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>((round_ + k) % d_)) = 1.0;
    ++round_;
  }
  return Context{action_count_, std::make_shared<const Eigen::MatrixXd>(std::move(X))};
}

double AdversarialLinearEnv::expected_reward(const Context& context, Action action) const {
  if (!context.features || action >= context.num_actions) throw std::out_of_range("adversarial env: invalid action");
  return context.features->row(static_cast<Eigen::Index>(action)).head(theta_.size()).dot(theta_);
}

double AdversarialLinearEnv::optimal_expected_reward(const Context& context) const {
  if (!context.features) throw std::invalid_argument("adversarial env: context carries no features");
  return (context.features->leftCols(theta_.size()) * theta_).maxCoeff();
}

double AdversarialLinearEnv::reward(const Context& context, Action action, Rng& rng) const {
  const double mean = std::clamp(expected_reward(context, action), -1.0, 1.0);
  double y = mean;
  if (noise_ == BoundedNoise::kRademacher) {
    y = std::bernoulli_distribution((1.0 + mean) / 2.0)(rng) ? 1.0 : -1.0;
  } else {
    y = mean + (1.0 - std::abs(mean)) * noise_scale_ * std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
  }
  return std::clamp(y, -1.0, 1.0);
}

nlohmann::json AdversarialLinearEnv::describe() const {
  return {{"type", "adversarial_linear"},
          {"dim", d_},
          {"dim_star", theta_.size()},
          {"actions", action_count_},
          {"schedule", schedule_ == FeatureSchedule::kSpherical ? "spherical" : "rotating"},
          {"noise", noise_ == BoundedNoise::kRademacher ? "rademacher" : "uniform"},
          {"noise_scale", noise_scale_},
          {"theta_star", std::vector<double>(theta_.data(), theta_.data() + theta_.size())}};
}

std::unique_ptr<AdversarialLinearEnv> make_adversarial_linear_env(std::size_t d, Eigen::VectorXd theta_star,
                                                                  std::size_t action_count,
                                                                  FeatureSchedule schedule, BoundedNoise noise,
                                                                  double noise_scale) {
  return std::make_unique<AdversarialLinearEnv>(d, std::move(theta_star), action_count, schedule, noise,
                                                noise_scale);
}

}  // namespace bcomb
