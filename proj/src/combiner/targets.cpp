#include <cmath>
#include <limits>
#include <stdexcept>

#include "bcomb/combiner.hpp"

namespace bcomb {

namespace {

// x^p with the 0^0 = 1 convention used at alpha = 1.
double pow0(double x, double p) { return p == 0.0 ? 1.0 : std::pow(x, p); }

// Relative slack for comparisons whose sides are built from the same terms.
constexpr double kRelSlack = 1e-12;

}  // namespace

std::vector<double> target_regrets_from_eta(const std::vector<PutativeBound>& bounds, const EtaPrior& prior,
                                            std::size_t horizon, double delta) {
  const std::size_t n = bounds.size();
  if (prior.etas.size() != n) throw std::invalid_argument("target regrets: eta count differs from base count");
  for (double eta : prior.etas)
    if (!(eta > 0.0) || !std::isfinite(eta)) throw std::invalid_argument("target regrets: every eta must be > 0");
  for (const auto& b : bounds) b.validate();

  const double T = static_cast<double>(horizon);
  const double L = log_term(horizon, n, delta);
  double inv_eta_sum = 0.0;
  for (double eta : prior.etas) inv_eta_sum += 1.0 / eta;

  std::vector<double> R(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = bounds[i].alpha;
    const double C = bounds[i].C;
    const double eta = prior.etas[i];
    const double p = (1.0 - a) / a;
    const double coefficient = pow0(1.0 - a, p) * std::pow(1.0 + a, 1.0 / a) / pow0(a, p);
    const double shape_term = C == 0.0 ? 0.0 : coefficient * std::pow(C, 1.0 / a) * T * pow0(eta, p);
    R[i] = bounds[i].at(T) + shape_term + 288.0 * L * T * eta + (inv_eta_sum - 1.0 / eta);
  }
  return R;
}

std::vector<double> target_regrets_experiment(const std::vector<PutativeBound>& bounds, std::size_t horizon) {
  const double n = static_cast<double>(bounds.size());
  const double root_t = std::sqrt(static_cast<double>(horizon));
  std::vector<double> R;
  R.reserve(bounds.size());
  for (const auto& b : bounds) R.push_back((b.C * b.C + n) * root_t);
  return R;
}

bool check_target_regret_conditions(const CombinerConfig& cfg) {
  const std::size_t n = cfg.n_bases();
  const double T = static_cast<double>(cfg.horizon);
  const double L = log_term(cfg.horizon, n, cfg.delta);

  std::vector<double> cross(n, 0.0);
  if (n > 1) {
    for (std::size_t k = 0; k < n; ++k) {
      const double Rk = cfg.targets[k];
      if (!(Rk > 0.0)) throw std::domain_error("feasibility check: R_k must be > 0 when N > 1");
      const double a = cfg.bounds[k].alpha;
      const double C = cfg.bounds[k].C;
      double term = 288.0 * L * T / Rk;
      if (a < 1.0 && C > 0.0) {
        const double q = 1.0 / (1.0 - a);
        const double log_f = std::log(1.0 - a) + q * std::log(1.0 + a) + q * std::log(2.0 * C) +
                             a * q * std::log(T) - std::log(a) - a * q * std::log(Rk);
        term = std::max(term, std::exp(log_f));
      }
      cross[k] = term;
    }
  }

  double total = 0.0;
  for (double c : cross) total += c;
  for (std::size_t i = 0; i < n; ++i) {
    const double Ri = cfg.targets[i];
    if (Ri < cfg.bounds[i].at(T)) return false;
    if (Ri * (1.0 + kRelSlack) < total - cross[i]) return false;
  }
  return true;
}

double alphabound_sup(double A, double B, double alpha) {
  if (!(alpha >= 0.5 && alpha < 1.0)) throw std::domain_error("alphabound_sup: alpha must lie in [0.5, 1)");
  if (!(B > 0.0)) throw std::domain_error("alphabound_sup: B must be > 0");
  if (!(A >= 0.0)) throw std::domain_error("alphabound_sup: A must be >= 0");
  if (A == 0.0) return 0.0;
  const double q = 1.0 / (1.0 - alpha);
  return std::exp(alpha * q * std::log(alpha) + std::log(1.0 - alpha) + q * std::log(A) -
                  alpha * q * std::log(B));
}

}  // namespace bcomb
