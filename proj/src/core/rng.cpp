#include "bcomb/core.hpp"

namespace bcomb {

Rng fork_rng(std::uint64_t base_seed, std::uint64_t stream_id) {
  std::seed_seq seq{static_cast<std::uint32_t>(base_seed), static_cast<std::uint32_t>(base_seed >> 32),
                    static_cast<std::uint32_t>(stream_id), static_cast<std::uint32_t>(stream_id >> 32)};
  return Rng(seq);
}

}  // namespace bcomb
