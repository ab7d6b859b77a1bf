#include <stdexcept>

#include "bcomb/bases.hpp"

namespace bcomb {

namespace {

class FixedArm final : public BaseAlgorithm {
 public:
  explicit FixedArm(Action arm) : arm_(arm) {}

  Action propose(const Context& context) override {
    if (arm_ >= context.num_actions) throw std::out_of_range("fixed arm: arm outside the action set");
    return arm_;
  }
  void feedback(const Context&, Action, double) override {}
  void reset() override {}
  std::string name() const override { return "fixed[" + std::to_string(arm_) + "]"; }

 private:
  Action arm_;
};

}  // namespace

std::unique_ptr<BaseAlgorithm> make_fixed_arm(Action arm) { return std::make_unique<FixedArm>(arm); }

}  // namespace bcomb
