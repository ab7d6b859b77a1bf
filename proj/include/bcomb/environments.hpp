#pragma once

// Synthetic reward sources. Every environment exposes exact expected rewards
// so that regret is measured without observation noise.

#include <cstddef>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "bcomb/core.hpp"

namespace bcomb {

/// Uniform direction on the unit sphere (normalized Gaussian).
Eigen::VectorXd sample_unit_sphere(std::size_t dim, Rng& rng);
/// K x d matrix of independent unit rows.
Eigen::MatrixXd sample_sphere_rows(std::size_t rows, std::size_t dim, Rng& rng);

// ------------------------------------------------------------- K-armed

enum class NoiseKind { kGaussian, kBernoulli };

struct KArmedNoise {
  NoiseKind kind = NoiseKind::kGaussian;
  double sigma = 0.1;
};

class KArmedEnv final : public Environment {
 public:
  KArmedEnv(std::vector<double> means, KArmedNoise noise);

  Context draw_context(Rng& rng) const override;
  double reward(const Context& context, Action action, Rng& rng) const override;
  double expected_reward(const Context& context, Action action) const override;
  double optimal_expected_reward(const Context& context) const override;
  nlohmann::json describe() const override;

  const std::vector<double>& means() const { return means_; }
  std::size_t best_arm() const { return best_; }

 private:
  std::vector<double> means_;
  KArmedNoise noise_;
  std::size_t best_ = 0;
};

std::unique_ptr<KArmedEnv> make_karmed_env(std::vector<double> means, KArmedNoise noise);

// ---------------------------------------------- fixed-feature linear arms

/// K arms with constant features; the reward of arm a is
/// expected[a] + sigma * N(0, 1).
class FixedFeatureEnv : public Environment {
 public:
  Context draw_context(Rng& rng) const override;
  double reward(const Context& context, Action action, Rng& rng) const override;
  double expected_reward(const Context& context, Action action) const override;
  double optimal_expected_reward(const Context& context) const override;

  const Eigen::MatrixXd& features() const { return *features_; }
  const Eigen::VectorXd& expected() const { return expected_; }
  const Eigen::VectorXd& parameter() const { return beta_; }
  std::size_t best_arm() const { return best_; }
  double sigma() const { return sigma_; }

 protected:
  FixedFeatureEnv(Eigen::MatrixXd features, Eigen::VectorXd beta, double sigma);
  void set_expected(Eigen::VectorXd expected);

  std::shared_ptr<const Eigen::MatrixXd> features_;
  Eigen::VectorXd beta_;
  Eigen::VectorXd expected_;
  double sigma_;
  std::size_t best_ = 0;
};

/// expected(a) = alpha_mix mu_a + (1 - alpha_mix) sqrt(d) <beta, x_a>, with
/// a* = argmin_a <beta, x_a>, mu_{a*} = 1 and mu_a = 0.25 sqrt(d) <beta, x_a>
/// otherwise.
class MisspecifiedLinearEnv final : public FixedFeatureEnv {
 public:
  MisspecifiedLinearEnv(Eigen::MatrixXd features, Eigen::VectorXd beta, double alpha_mix, double sigma,
                        std::size_t rejections = 0);

  nlohmann::json describe() const override;

  std::size_t worst_linear_arm() const { return a_star_; }
  const Eigen::VectorXd& offsets() const { return offsets_; }
  double alpha_mix() const { return alpha_mix_; }
  std::size_t rejections() const { return rejections_; }

 private:
  double alpha_mix_;
  std::size_t a_star_ = 0;
  Eigen::VectorXd offsets_;
  std::size_t rejections_;
};

/// With alpha_mix = 1 instances are redrawn until a* is strictly optimal.
std::unique_ptr<MisspecifiedLinearEnv> make_misspecified_env(std::size_t K, std::size_t d, double alpha_mix,
                                                             double sigma, Rng& rng);

/// expected(a) = <beta, x_a> with beta supported on the first d_star
/// coordinates and ||beta|| = 1.
class ModelSelectionEnv final : public FixedFeatureEnv {
 public:
  ModelSelectionEnv(Eigen::MatrixXd features, Eigen::VectorXd beta, std::size_t d_star, double sigma);

  nlohmann::json describe() const override;
  std::size_t d_star() const { return d_star_; }

 private:
  std::size_t d_star_;
};

std::unique_ptr<ModelSelectionEnv> make_model_selection_env(std::size_t K, std::size_t d, std::size_t d_star,
                                                            double sigma, Rng& rng);

// ------------------------------------------------ adversarial-context linear

enum class FeatureSchedule {
  kSpherical,  ///< fresh i.i.d. unit features every round
  kRotating,   ///< action k on round t has feature e_{(t + k) mod d}
};

enum class BoundedNoise {
  kRademacher,  ///< y in {-1, +1} with mean <x, theta>
  kUniform,     ///< y = m + (1 - |m|) * scale * U(-1, 1)
};

/// Features are revealed fresh each round; the reward is linear in the first
/// d_star coordinates with parameter theta_star and observations lie in
/// [-1, 1].
class AdversarialLinearEnv final : public Environment {
 public:
  AdversarialLinearEnv(std::size_t d, Eigen::VectorXd theta_star, std::size_t action_count,
                       FeatureSchedule schedule, BoundedNoise noise = BoundedNoise::kRademacher,
                       double noise_scale = 1.0);

  Context draw_context(Rng& rng) const override;
  double reward(const Context& context, Action action, Rng& rng) const override;
  double expected_reward(const Context& context, Action action) const override;
  double optimal_expected_reward(const Context& context) const override;
  nlohmann::json describe() const override;

  std::size_t dim() const { return d_; }
  std::size_t d_star() const { return static_cast<std::size_t>(theta_.size()); }
  const Eigen::VectorXd& theta_star() const { return theta_; }

 private:
  std::size_t d_;
  Eigen::VectorXd theta_;
  std::size_t action_count_;
  FeatureSchedule schedule_;
  BoundedNoise noise_;
  double noise_scale_;
  // Round cursor for the rotating schedule.
  mutable std::size_t round_ = 0;
};

/// theta_star has length d_star (the prefix seen by the well-specified base).
std::unique_ptr<AdversarialLinearEnv> make_adversarial_linear_env(std::size_t d, Eigen::VectorXd theta_star,
                                                                  std::size_t action_count,
                                                                  FeatureSchedule schedule,
                                                                  BoundedNoise noise = BoundedNoise::kRademacher,
                                                                  double noise_scale = 1.0);

}  // namespace bcomb
