#include <doctest.h>

#include <cmath>

#include "bcomb/adversarial.hpp"
#include "bcomb/environments.hpp"

using namespace bcomb;

TEST_CASE("beta_scale") {
  const double b = beta_scale(1000, 4, 2.0, 0.05);
  CHECK(b * b == doctest::Approx(4.66e4).epsilon(5e-3));
  CHECK(b == doctest::Approx(216.0).epsilon(5e-3));
  CHECK(beta_scale(1000, 4, 2.0, 0.05, true) == doctest::Approx(b * b));
  CHECK(beta_scale(1000, 8, 2.0, 0.05) > b);
  CHECK(beta_scale(1000, 4, 2.0, 0.05) > beta_scale(1000, 4, 2.0, 0.5));
  CHECK_THROWS(beta_scale(1000, 4, 2.0, 0.0));
  CHECK_THROWS(beta_scale(1, 4, 2.0, 0.1));
}

TEST_CASE("adv_ucb_index examples") {
  LinUcbState fresh(3, 2.0, 5.0);
  Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(1, 3);
  CHECK(adv_ucb_index(fresh, zero, 0.0, 100) == 0.0);

  Eigen::MatrixXd X(2, 3);
  X << 0.5, 0, 0, 0, 1.0, 0;
  CHECK(adv_ucb_index(fresh, X, 30.0, 100) == doctest::Approx(5.0 / std::sqrt(2.0) - 0.3));

  LinUcbState greedy(2, 2.0, 0.0);
  greedy.update(Eigen::Vector2d(1, 0), 1.0);
  Eigen::MatrixXd E = Eigen::MatrixXd::Identity(2, 2);
  CHECK(adv_ucb_index(greedy, E, 10.0, 100) == doctest::Approx(1.0 / 3.0 - 0.1));

  // The shift applies after the max, so the chosen action does not move.
  CHECK(linucb_select(greedy, E) == 0);
  Eigen::MatrixXd wrong = Eigen::MatrixXd::Zero(2, 5);
  CHECK_THROWS(adv_ucb_index(fresh, wrong, 0.0, 100));
}

TEST_CASE("z_statistic examples") {
  LinUcbState s(2, 2.0, 1.0);
  CHECK(z_statistic(s, Eigen::Vector2d::Zero(), 0.4) == doctest::Approx(-0.4));
  CHECK(z_statistic(s, Eigen::Vector2d(0.6, 0.8), 0.0) <= 0.0);

  // One observation y = 3 at e1 with lambda = 2 gives M = diag(3, 2) and
  // mu_hat = e1, so z(e1, 0.5) = 1 - 0.5 - 1/sqrt(3).
  LinUcbState t(2, 2.0, 1.0);
  t.update(Eigen::Vector2d(1, 0), 3.0);
  CHECK(t.mu_hat()(0) == doctest::Approx(1.0));
  CHECK(z_statistic(t, Eigen::Vector2d(1, 0), 0.5) == doctest::Approx(0.5 - 1.0 / std::sqrt(3.0)));
}

TEST_CASE("adv_elimination_test examples") {
  AdvBaseState fresh{LinUcbState(2, 2.0, 1.0)};
  CHECK_FALSE(adv_elimination_test(fresh, {0.0, 0.5}, 100, 0.1));

  AdvBaseState slack{LinUcbState(2, 2.0, 1.0)};
  slack.count = 100000;
  slack.z_sum = -5.0;
  slack.bonus_sum = 1e5;
  CHECK_FALSE(adv_elimination_test(slack, {1e9, 0.5}, 100000, 0.1));

  AdvBaseState first{LinUcbState(2, 2.0, 3.0)};
  const Eigen::Vector2d a(1, 0);
  first.bonus_sum = 2.0 * first.learner.beta() * first.learner.width(a);
  first.count = 1;
  CHECK(first.bonus_sum == doctest::Approx(2.0 * 3.0 / std::sqrt(2.0)));
  CHECK(adv_elimination_test(first, {0.0, 0.5}, 100, 0.1));

  AdvBaseState drifting{LinUcbState(2, 2.0, 1.0)};
  drifting.count = 100;
  drifting.z_sum = 2.0 * std::sqrt(100.0 * std::log(100.0 / 0.1)) + 1e-6;
  CHECK(adv_elimination_test(drifting, {1e9, 0.5}, 100, 0.1));
}

TEST_CASE("run_adversarial") {
  SUBCASE("zero horizon") {
    auto env = make_adversarial_linear_env(4, Eigen::Vector2d(0.6, 0.0), 5, FeatureSchedule::kSpherical);
    AdvConfig cfg = AdvConfig::with_defaults({2}, 10, 0.1);
    cfg.horizon = 0;
    Rng rng = fork_rng(1, 1);
    CHECK(run_adversarial(*env, cfg, rng).rows.empty());
  }
  SUBCASE("single base equals a plain linUCB run") {
    auto env = make_adversarial_linear_env(6, Eigen::Vector3d(0.5, -0.4, 0.3), 8, FeatureSchedule::kSpherical);
    AdvConfig cfg = AdvConfig::with_defaults({3}, 400, 0.1);
    cfg.targets = {123.0};
    Rng rng = fork_rng(4, 1);
    const auto trace = run_adversarial(*env, cfg, rng);

    Rng ref_rng = fork_rng(4, 1);
    LinUcbState ref(3, 2.0, beta_scale(400, 3, 2.0, 0.1));
    for (std::size_t t = 0; t < 400; ++t) {
      const Context ctx = env->draw_context(ref_rng);
      const auto X = ctx.features->leftCols(3);
      const std::size_t a = linucb_select(ref, X);
      const double y = env->reward(ctx, a, ref_rng);
      ref.update(X.row(static_cast<Eigen::Index>(a)).transpose(), y);
      const double expected_regret = env->optimal_expected_reward(ctx) - env->expected_reward(ctx, a);
      CHECK(trace.rows[t].inst_regret == doctest::Approx(expected_regret));
    }
  }
  SUBCASE("same seed twice and one action means zero regret") {
    auto env = make_adversarial_linear_env(4, Eigen::Vector2d(0.6, 0.5), 1, FeatureSchedule::kRotating);
    AdvConfig cfg = AdvConfig::with_defaults({2, 4}, 300, 0.1);
    Rng r1 = fork_rng(2, 1);
    const auto a = run_adversarial(*env, cfg, r1);
    CHECK(a.final_regret() == 0.0);

    auto e1 = make_adversarial_linear_env(4, Eigen::Vector2d(0.6, 0.5), 5, FeatureSchedule::kSpherical);
    auto e2 = make_adversarial_linear_env(4, Eigen::Vector2d(0.6, 0.5), 5, FeatureSchedule::kSpherical);
    Rng r2 = fork_rng(2, 1);
    Rng r3 = fork_rng(2, 1);
    const auto b = run_adversarial(*e1, cfg, r2);
    const auto c = run_adversarial(*e2, cfg, r3);
    for (std::size_t t = 0; t < 300; ++t) {
      CHECK(b.rows[t].chosen == c.rows[t].chosen);
      CHECK(b.rows[t].cum_regret == c.rows[t].cum_regret);
    }
  }
  SUBCASE("eliminated bases are never replayed") {
    auto env = make_adversarial_linear_env(4, Eigen::Vector4d(0.5, 0.5, 0.5, 0.5), 6, FeatureSchedule::kSpherical);
    AdvConfig cfg = AdvConfig::with_defaults({1, 4}, 1000, 0.1);
    cfg.bounds[0].C = 0.0;
    Rng rng = fork_rng(8, 1);
    const auto trace = run_adversarial(*env, cfg, rng);
    REQUIRE(trace.eliminated(0));
    std::size_t at = 0;
    for (const auto& e : trace.eliminations)
      if (e.base == 0) at = e.t;
    if (trace.fallback_count == 0)
      for (std::size_t t = at; t < trace.rows.size(); ++t) CHECK(trace.rows[t].chosen != 0);
  }
  SUBCASE("config validation") {
    AdvConfig cfg = AdvConfig::with_defaults({2}, 100, 0.1, 1.0);
    CHECK_THROWS(cfg.validate());
  }
}

TEST_CASE("bonus budget along a lone linUCB trajectory") {
  const std::size_t d = 4;
  auto env = make_adversarial_linear_env(d, Eigen::Vector4d(0.5, -0.5, 0.5, 0.5), 10, FeatureSchedule::kSpherical);
  AdvConfig cfg = AdvConfig::with_defaults({d}, 2000, 0.1);
  Rng rng = fork_rng(12, 1);
  bool holds = true;
  run_adversarial(*env, cfg, rng, [&](std::size_t, std::size_t, const AdvBaseState& base) {
    const double t = static_cast<double>(base.count);
    const double beta = base.learner.beta();
    const double budget = beta * std::sqrt(static_cast<double>(d) * t * std::log(1.0 + 2.0 * t / 2.0));
    if (base.bonus_sum / 2.0 > budget) holds = false;
    if (base.bonus_sum > cfg.bounds[0].at(t)) holds = false;
  });
  CHECK(holds);
}
