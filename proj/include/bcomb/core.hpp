#pragma once

// Shared contracts: randomness, contexts, the base-algorithm and environment
// interfaces, and pseudo-regret bookkeeping.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

namespace bcomb {

using Rng = std::mt19937_64;
using Action = std::size_t;

/// Deterministic stream for (base_seed, stream_id). Distinct ids give
/// independent streams; the same pair always gives the same stream.
Rng fork_rng(std::uint64_t base_seed, std::uint64_t stream_id);

/// Claimed anytime regret envelope C * t^alpha.
struct PutativeBound {
  double C = 0.0;
  double alpha = 0.5;

  void validate() const;
  double at(double t) const;
};

/// What a learner sees on one round. K-armed problems carry only the
/// action count; linear problems carry one feature row per action.
struct Context {
  std::size_t num_actions = 0;
  std::shared_ptr<const Eigen::MatrixXd> features;

  std::size_t dim() const { return features ? static_cast<std::size_t>(features->cols()) : 0; }
};

class BaseAlgorithm {
 public:
  virtual ~BaseAlgorithm() = default;

  virtual Action propose(const Context& context) = 0;
  virtual void feedback(const Context& context, Action action, double reward) = 0;
  virtual void reset() = 0;
  virtual std::string name() const = 0;
};

/// Builds a fresh base instance owning the given random stream.
using BaseFactory = std::function<std::unique_ptr<BaseAlgorithm>(Rng)>;

/// Environments are immutable after construction; all randomness flows
/// through the caller-owned stream.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual Context draw_context(Rng& rng) const = 0;
  virtual double reward(const Context& context, Action action, Rng& rng) const = 0;
  virtual double expected_reward(const Context& context, Action action) const = 0;
  virtual double optimal_expected_reward(const Context& context) const = 0;
  virtual nlohmann::json describe() const = 0;
};

struct RegretRow {
  std::size_t t = 0;
  std::size_t chosen = 0;
  double inst_regret = 0.0;
  double cum_regret = 0.0;
  std::size_t active_count = 0;
};

struct Elimination {
  std::size_t base = 0;
  std::size_t t = 0;
};

struct RegretTrace {
  std::vector<RegretRow> rows;
  std::vector<Elimination> eliminations;
  /// Times the active set emptied and every base was reinstated.
  std::size_t fallback_count = 0;

  double final_regret() const { return rows.empty() ? 0.0 : rows.back().cum_regret; }
  bool eliminated(std::size_t base) const;
};

/// Appends one round of pseudo-regret r_star_t - r_t.
void accumulate_regret(RegretTrace& trace, double r_star_t, double r_t, std::size_t chosen,
                       std::size_t active);

/// Plays a single base on its own for `horizon` rounds.
RegretTrace run_alone(const Environment& env, BaseAlgorithm& base, std::size_t horizon, Rng& env_rng);

}  // namespace bcomb
