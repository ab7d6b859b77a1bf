#pragma once

// Brute-force reference values used to cross-check closed forms.

#include <cstddef>

namespace bcomb {

/// max over Z in {0, step, 2 step, ..., <= z_max} of A Z^alpha - B Z.
double brute_force_sup(double A, double B, double alpha, double z_max, double step);

/// Same supremum over a log-spaced grid on [1e-300, 1e300] plus Z = 0,
/// refined with a uniform grid around the best log point. Suitable when the
/// maximizer spans hundreds of orders of magnitude.
double brute_force_sup_log(double A, double B, double alpha, std::size_t per_decade = 20,
                           std::size_t refine = 2000);

}  // namespace bcomb
