#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "bcomb/environments.hpp"

namespace bcomb {

KArmedEnv::KArmedEnv(std::vector<double> means, KArmedNoise noise) : means_(std::move(means)), noise_(noise) {
  if (means_.empty()) throw std::invalid_argument("karmed: at least one arm is required");
  for (double m : means_) {
    if (!std::isfinite(m)) throw std::invalid_argument("karmed: means must be finite");
    if (noise_.kind == NoiseKind::kBernoulli && (m < 0.0 || m > 1.0))
      throw std::invalid_argument("karmed: bernoulli means must lie in [0, 1]");
  }
  if (noise_.kind == NoiseKind::kGaussian && !(noise_.sigma >= 0.0))
    throw std::invalid_argument("karmed: sigma must be >= 0");
  best_ = static_cast<std::size_t>(std::max_element(means_.begin(), means_.end()) - means_.begin());
}

Context KArmedEnv::draw_context(Rng&) const { return Context{means_.size(), nullptr}; }

double KArmedEnv::reward(const Context& context, Action action, Rng& rng) const {
  const double mean = expected_reward(context, action);
  if (noise_.kind == NoiseKind::kBernoulli) return std::bernoulli_distribution(mean)(rng) ? 1.0 : 0.0;
  return mean + noise_.sigma * std::normal_distribution<double>(0.0, 1.0)(rng);
}

double KArmedEnv::expected_reward(const Context&, Action action) const {
  if (action >= means_.size()) throw std::out_of_range("karmed: invalid arm");
  return means_[action];
}

double KArmedEnv::optimal_expected_reward(const Context&) const { return means_[best_]; }

nlohmann::json KArmedEnv::describe() const {
  return {{"type", "karmed"},
          {"arms", means_.size()},
          {"means", means_},
          {"noise", noise_.kind == NoiseKind::kBernoulli ? "bernoulli" : "gaussian"},
          {"sigma", noise_.sigma}};
}

std::unique_ptr<KArmedEnv> make_karmed_env(std::vector<double> means, KArmedNoise noise) {
  return std::make_unique<KArmedEnv>(std::move(means), noise);
}

}  // namespace bcomb
