#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "bcomb/bases.hpp"

namespace bcomb {

UcbState::UcbState(std::size_t arms, double conf_scale_)
    : counts(arms, 0), means(arms, 0.0), conf_scale(conf_scale_) {}

double ucb_default_conf_scale(std::size_t horizon, std::size_t arms, double delta, double sigma) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("ucb: delta must lie in (0, 1)");
  const double t = static_cast<double>(std::max<std::size_t>(horizon, 1));
  const double k = static_cast<double>(std::max<std::size_t>(arms, 1));
  return sigma * std::sqrt(2.0 * std::log(2.0 * t * k / delta));
}

std::size_t ucb_select(const UcbState& state) {
  if (state.arms() == 0) throw std::invalid_argument("ucb_select: no arms");
  std::size_t best = 0;
  double best_index = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < state.arms(); ++a) {
    if (state.counts[a] == 0) return a;
    const double index = state.means[a] + state.conf_scale / std::sqrt(static_cast<double>(state.counts[a]));
    if (index > best_index) {
      best_index = index;
      best = a;
    }
  }
  return best;
}

void ucb_update(UcbState& state, std::size_t arm, double reward) {
  if (arm >= state.arms()) throw std::out_of_range("ucb_update: invalid arm");
  const double n = static_cast<double>(++state.counts[arm]);
  state.means[arm] += (reward - state.means[arm]) / n;
}

namespace {

class SubsetUcb final : public BaseAlgorithm {
 public:
  SubsetUcb(std::vector<std::size_t> subset, double conf_scale)
      : subset_(std::move(subset)), state_(subset_.size(), conf_scale) {}

  Action propose(const Context& context) override {
    const std::size_t local = ucb_select(state_);
    if (subset_[local] >= context.num_actions) throw std::out_of_range("ucb: arm outside the action set");
    return subset_[local];
  }

  void feedback(const Context&, Action action, double reward) override {
    const auto it = std::find(subset_.begin(), subset_.end(), action);
    if (it == subset_.end()) throw std::out_of_range("ucb: feedback for an arm outside the subset");
    ucb_update(state_, static_cast<std::size_t>(it - subset_.begin()), reward);
  }

  void reset() override { state_ = UcbState(subset_.size(), state_.conf_scale); }

  std::string name() const override { return "ucb[" + std::to_string(subset_.size()) + "]"; }

 private:
  std::vector<std::size_t> subset_;
  UcbState state_;
};

}  // namespace

std::unique_ptr<BaseAlgorithm> make_ucb(std::size_t arms, double conf_scale) {
  std::vector<std::size_t> all(arms);
  for (std::size_t a = 0; a < arms; ++a) all[a] = a;
  return make_restricted_ucb(std::move(all), conf_scale);
}

std::unique_ptr<BaseAlgorithm> make_restricted_ucb(std::vector<std::size_t> arm_subset, double conf_scale) {
  if (arm_subset.empty()) throw std::invalid_argument("restricted ucb: empty arm subset");
  return std::make_unique<SubsetUcb>(std::move(arm_subset), conf_scale);
}

}  // namespace bcomb
