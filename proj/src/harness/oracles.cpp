#include "bcomb/harness/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bcomb {
namespace {

double objective(double A, double B, double alpha, double z) { return A * std::pow(z, alpha) - B * z; }

}  // namespace

double brute_force_sup(double A, double B, double alpha, double z_max, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("brute_force_sup: step must be > 0");
  double best = objective(A, B, alpha, 0.0);
  const auto n = static_cast<std::size_t>(std::floor(z_max / step));
  for (std::size_t k = 1; k <= n; ++k) best = std::max(best, objective(A, B, alpha, static_cast<double>(k) * step));
  return best;
}

double brute_force_sup_log(double A, double B, double alpha, std::size_t per_decade, std::size_t refine) {
  if (per_decade == 0) throw std::invalid_argument("brute_force_sup_log: per_decade must be >= 1");
  double best = objective(A, B, alpha, 0.0);
  double best_z = 0.0;
  const double lo = -300.0;
  const double hi = 300.0;
  const auto points = static_cast<std::size_t>((hi - lo) * static_cast<double>(per_decade));
  const double stride = (hi - lo) / static_cast<double>(points);
  for (std::size_t k = 0; k <= points; ++k) {
    const double z = std::pow(10.0, lo + stride * static_cast<double>(k));
    const double v = objective(A, B, alpha, z);
    if (v > best) {
      best = v;
      best_z = z;
    }
  }
  if (best_z > 0.0 && refine > 0) {
    const double factor = std::pow(10.0, stride);
    const double a = best_z / factor;
    const double b = best_z * factor;
    for (std::size_t k = 0; k <= refine; ++k) {
      const double z = a + (b - a) * static_cast<double>(k) / static_cast<double>(refine);
      best = std::max(best, objective(A, B, alpha, z));
    }
  }
  return best;
}

}  // namespace bcomb
