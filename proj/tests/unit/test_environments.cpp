#include <doctest.h>

#include <cmath>

#include "bcomb/bases.hpp"
#include "bcomb/environments.hpp"

using namespace bcomb;

namespace {

double sample_mean(const Environment& env, const Context& ctx, Action a, Rng& rng, int n) {
  double sum = 0.0;
  for (int k = 0; k < n; ++k) sum += env.reward(ctx, a, rng);
  return sum / n;
}

}  // namespace

TEST_CASE("misspecified environment invariants") {
  Rng rng = fork_rng(1, 0);
  for (double alpha_mix : {0.0, 0.3, 1.0}) {
    auto env = make_misspecified_env(50, 10, alpha_mix, 0.1, rng);
    const auto& X = env->features();
    for (Eigen::Index a = 0; a < X.rows(); ++a) CHECK(std::abs(X.row(a).norm() - 1.0) <= 1e-9);
    CHECK(std::abs(env->parameter().norm() - 1.0) <= 1e-9);
    const Eigen::VectorXd linear = X * env->parameter();
    Eigen::Index worst = 0;
    linear.minCoeff(&worst);
    CHECK(env->worst_linear_arm() == static_cast<std::size_t>(worst));
    const double root_d = std::sqrt(10.0);
    for (Eigen::Index a = 0; a < X.rows(); ++a) {
      const double mu = a == worst ? 1.0 : 0.25 * root_d * linear(a);
      CHECK(env->offsets()(a) == doctest::Approx(mu));
      CHECK(env->expected()(a) == doctest::Approx(alpha_mix * mu + (1.0 - alpha_mix) * root_d * linear(a)));
    }
    if (alpha_mix == 1.0) {
      for (Eigen::Index a = 0; a < X.rows(); ++a)
        if (a != worst) CHECK(env->expected()(a) < env->expected()(worst));
      CHECK(env->best_arm() == static_cast<std::size_t>(worst));
    }
  }
  CHECK_THROWS(make_misspecified_env(1, 10, 0.0, 0.1, rng));
  CHECK_THROWS(make_misspecified_env(5, 0, 0.0, 0.1, rng));
  CHECK_THROWS(make_misspecified_env(5, 3, 0.0, -0.1, rng));
  CHECK_THROWS(make_misspecified_env(5, 3, 1.5, 0.1, rng));
}

TEST_CASE("misspecified environment examples") {
  Rng rng = fork_rng(2, 0);
  auto linear = make_misspecified_env(20, 4, 0.0, 0.0, rng);
  const Context ctx = linear->draw_context(rng);
  for (Action a = 0; a < 20; ++a)
    CHECK(linear->reward(ctx, a, rng) ==
          doctest::Approx(2.0 * linear->features().row(static_cast<Eigen::Index>(a)).dot(linear->parameter())));

  Eigen::MatrixXd X(2, 4);
  X << 1, 0, 0, 0, -1, 0, 0, 0;
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(4);
  beta(0) = 1.0;
  MisspecifiedLinearEnv mixed(X, beta, 0.5, 0.0);
  CHECK(mixed.worst_linear_arm() == 1);
  CHECK(mixed.expected_reward(ctx, 0) == doctest::Approx(1.25));
}

TEST_CASE("model selection environment invariants") {
  Rng rng = fork_rng(3, 0);
  auto env = make_model_selection_env(200, 128, 8, 0.1, rng);
  const auto& beta = env->parameter();
  CHECK(std::abs(beta.norm() - 1.0) <= 1e-9);
  for (Eigen::Index j = 8; j < beta.size(); ++j) CHECK(beta(j) == 0.0);
  const Context ctx = env->draw_context(rng);
  CHECK(env->expected_reward(ctx, 5) == doctest::Approx(env->features().row(5).dot(beta)));

  auto dense = make_model_selection_env(10, 6, 6, 0.1, rng);
  for (Eigen::Index j = 0; j < 6; ++j) CHECK(dense->parameter()(j) != 0.0);
  CHECK_THROWS(make_model_selection_env(10, 4, 5, 0.1, rng));
  CHECK_THROWS(make_model_selection_env(10, 4, 0, 0.1, rng));
}

TEST_CASE("k-armed environment") {
  Rng rng = fork_rng(4, 0);
  auto flat = make_karmed_env({0.5, 0.5}, {NoiseKind::kBernoulli, 0.0});
  auto base = make_ucb(2, 1.0);
  const auto trace = run_alone(*flat, *base, 200, rng);
  CHECK(trace.final_regret() == 0.0);

  auto two = make_karmed_env({0.9, 0.6}, {NoiseKind::kBernoulli, 0.0});
  const Context c = two->draw_context(rng);
  CHECK(two->optimal_expected_reward(c) - two->expected_reward(c, 1) == doctest::Approx(0.3));
  CHECK(c.features == nullptr);

  std::vector<double> means(20);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (double& m : means) m = U(rng);
  auto bed = make_karmed_env(means, {NoiseKind::kGaussian, 0.1});
  CHECK(bed->best_arm() == static_cast<std::size_t>(std::max_element(means.begin(), means.end()) - means.begin()));

  CHECK_THROWS(make_karmed_env({}, {NoiseKind::kGaussian, 0.1}));
  CHECK_THROWS(make_karmed_env({1.5}, {NoiseKind::kBernoulli, 0.0}));
  CHECK_THROWS(make_karmed_env({0.5}, {NoiseKind::kGaussian, -1.0}));
}

TEST_CASE("adversarial linear environment") {
  Rng rng = fork_rng(5, 0);
  auto single = make_adversarial_linear_env(4, Eigen::Vector2d(0.3, 0.4), 1, FeatureSchedule::kSpherical);
  for (int t = 0; t < 20; ++t) {
    const Context c = single->draw_context(rng);
    CHECK(single->optimal_expected_reward(c) == single->expected_reward(c, 0));
  }

  auto zero = make_adversarial_linear_env(4, Eigen::Vector2d::Zero(), 5, FeatureSchedule::kSpherical);
  const Context cz = zero->draw_context(rng);
  for (Action a = 0; a < 5; ++a) CHECK(zero->expected_reward(cz, a) == 0.0);

  Eigen::VectorXd theta(4);
  theta << 0.1, -0.5, 0.6, 0.2;
  auto rot = make_adversarial_linear_env(8, theta, 3, FeatureSchedule::kRotating);
  for (int t = 0; t < 16; ++t) {
    const Context c = rot->draw_context(rng);
    double best = -1e9;
    for (Action a = 0; a < 3; ++a) {
      const Eigen::VectorXd x = c.features->row(static_cast<Eigen::Index>(a)).transpose();
      CHECK(x.norm() == doctest::Approx(1.0));
      CHECK(x(static_cast<Eigen::Index>((t + a) % 8)) == 1.0);
      best = std::max(best, x.head(4).dot(theta));
    }
    CHECK(rot->optimal_expected_reward(c) == doctest::Approx(best));
  }

  CHECK_THROWS(make_adversarial_linear_env(4, Eigen::Vector2d(1.0, 1.0), 3, FeatureSchedule::kSpherical));
  CHECK_THROWS(make_adversarial_linear_env(2, Eigen::Vector3d(0.1, 0.1, 0.1), 3, FeatureSchedule::kSpherical));
  CHECK_THROWS(make_adversarial_linear_env(4, Eigen::Vector2d(0.1, 0.1), 3, FeatureSchedule::kSpherical,
                                           BoundedNoise::kUniform, 2.0));
}

TEST_CASE("observed rewards average to the expected reward") {
  constexpr int n = 100000;
  const double tol = 4.0 / std::sqrt(static_cast<double>(n));
  Rng rng = fork_rng(6, 0);

  auto karmed = make_karmed_env({0.2, 0.7}, {NoiseKind::kGaussian, 0.5});
  const Context ck = karmed->draw_context(rng);
  CHECK(std::abs(sample_mean(*karmed, ck, 1, rng, n) - 0.7) <= 0.5 * tol);

  auto bern = make_karmed_env({0.2, 0.7}, {NoiseKind::kBernoulli, 0.0});
  CHECK(std::abs(sample_mean(*bern, ck, 0, rng, n) - 0.2) <= 0.5 * tol);

  auto mis = make_misspecified_env(10, 5, 0.5, 0.3, rng);
  const Context cm = mis->draw_context(rng);
  CHECK(std::abs(sample_mean(*mis, cm, 3, rng, n) - mis->expected_reward(cm, 3)) <= 0.3 * tol);

  auto ms = make_model_selection_env(10, 16, 4, 0.3, rng);
  const Context cs = ms->draw_context(rng);
  CHECK(std::abs(sample_mean(*ms, cs, 2, rng, n) - ms->expected_reward(cs, 2)) <= 0.3 * tol);

  for (auto noise : {BoundedNoise::kRademacher, BoundedNoise::kUniform}) {
    auto adv = make_adversarial_linear_env(3, Eigen::Vector3d(0.4, -0.3, 0.2), 4, FeatureSchedule::kSpherical,
                                           noise, 0.8);
    const Context ca = adv->draw_context(rng);
    for (int k = 0; k < 1000; ++k) {
      const double y = adv->reward(ca, 1, rng);
      CHECK(y >= -1.0);
      CHECK(y <= 1.0);
    }
    CHECK(std::abs(sample_mean(*adv, ca, 1, rng, n) - adv->expected_reward(ca, 1)) <= tol);
  }
}

TEST_CASE("linUCB trends on the misspecified family") {
  const std::size_t T = 20000;
  SUBCASE("alpha_mix = 1 forces linear regret") {
    Rng rng = fork_rng(7, 0);
    auto env = make_misspecified_env(50, 10, 1.0, 0.1, rng);
    const Eigen::VectorXd linear = env->features() * env->parameter();
    Eigen::Index lin_pick = 0;
    linear.maxCoeff(&lin_pick);
    const double gap = env->expected()(static_cast<Eigen::Index>(env->best_arm())) - env->expected()(lin_pick);
    auto base = make_restricted_linucb(10, 2.0, linucb_default_beta(10, T, 2.0, 0.05, 0.1, std::sqrt(10.0)));
    Rng noise = fork_rng(7, 1);
    const auto trace = run_alone(*env, *base, T, noise);
    CHECK(trace.final_regret() >= 0.5 * gap * static_cast<double>(T));
  }
  SUBCASE("alpha_mix = 0 favours linUCB over UCB") {
    double lin = 0.0;
    double ucb = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      Rng inst = fork_rng(100 + seed, 0);
      auto env = make_misspecified_env(50, 10, 0.0, 0.1, inst);
      auto l = make_restricted_linucb(10, 0.1, linucb_default_beta(10, T, 0.1, 0.05, 0.1, std::sqrt(10.0)));
      auto u = make_ucb(50, ucb_default_conf_scale(T, 50, 0.05));
      Rng n1 = fork_rng(100 + seed, 1);
      Rng n2 = fork_rng(100 + seed, 1);
      lin += run_alone(*env, *l, T, n1).final_regret();
      ucb += run_alone(*env, *u, T, n2).final_regret();
    }
    CHECK(lin < 0.25 * ucb);
  }
}
