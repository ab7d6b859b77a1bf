#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "bcomb/combiner.hpp"

namespace bcomb {

GridShape doubling_grid_shape(std::size_t horizon, double delta) {
  if (horizon < 2) throw std::invalid_argument("doubling grid: horizon must be >= 2");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("doubling grid: delta must lie in (0, 1)");
  GridShape shape;
  shape.M = static_cast<std::size_t>(std::max(1.0, std::ceil(std::log2(1.0 / delta) - 1e-12)));
  // ceil(log2 T) for integer T, and ceil(log2(T) / 2) == ceil(K / 2).
  shape.K = static_cast<std::size_t>(std::bit_width(horizon - 1));
  shape.L = (shape.K + 1) / 2;
  return shape;
}

std::vector<DoublingCell> build_doubling_grid(std::size_t n_originals, std::size_t horizon, double delta,
                                              const EtaPrior& prior) {
  if (prior.etas.size() != n_originals) throw std::invalid_argument("doubling grid: eta count differs from N");
  const GridShape shape = doubling_grid_shape(horizon, delta);
  const double log2_t = std::log2(static_cast<double>(horizon));

  std::vector<DoublingCell> cells;
  cells.reserve(n_originals * shape.M * shape.K * shape.L);
  for (std::size_t i = 0; i < n_originals; ++i)
    for (std::size_t x = 1; x <= shape.M; ++x)
      for (std::size_t y = 1; y <= shape.K; ++y)
        for (std::size_t z = 1; z <= shape.L; ++z) {
          DoublingCell cell;
          cell.original = i;
          cell.x = x;
          cell.y = y;
          cell.z = z;
          cell.C = std::ldexp(1.0, static_cast<int>(y));
          cell.alpha = std::min(1.0, 0.5 + static_cast<double>(z) / log2_t);
          cell.eta = prior.etas[i];
          cells.push_back(cell);
        }
  return cells;
}

}  // namespace bcomb
