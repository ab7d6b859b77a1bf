#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bcomb/harness/experiment.hpp"

namespace bcomb {

CalibrationResult calibrate_putative_bound(const BaseFactory& base, const EnvFactory& env, std::size_t horizon,
                                           double alpha, std::size_t reps, std::uint64_t seed,
                                           const std::string& base_id) {
  if (!(alpha >= 0.5 && alpha <= 1.0)) throw std::invalid_argument("calibrate: alpha must lie in [0.5, 1]");
  if (horizon < 1 || reps < 1) throw std::invalid_argument("calibrate: need horizon >= 1 and reps >= 1");
  CalibrationResult out;
  out.base = base_id;
  out.alpha = alpha;
  for (std::size_t r = 0; r < reps; ++r) {
    const std::uint64_t stream = r * kStreamsPerRep;
    Rng instance_rng = fork_rng(seed, stream + kSlotEnvInstance);
    Rng noise_rng = fork_rng(seed, stream + kSlotEnvNoise);
    auto environment = env(instance_rng);
    auto learner = base(fork_rng(seed, stream + kSlotBase));
    const RegretTrace trace = run_alone(*environment, *learner, horizon, noise_rng);
    double ratio = 0.0;
    for (const auto& row : trace.rows)
      ratio = std::max(ratio, row.cum_regret / std::pow(static_cast<double>(row.t), alpha));
    out.per_rep.push_back(ratio);
    out.C = std::max(out.C, ratio);
  }
  return out;
}

}  // namespace bcomb
