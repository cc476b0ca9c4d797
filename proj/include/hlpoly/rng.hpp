#pragma once

#include <cstdint>
#include <random>

namespace hlpoly {

// Seed expansion. Every random stream in the library is obtained from one
// user seed via derive_seed(seed, stream_id), which is splitmix64 applied to
// seed + golden_gamma * (stream_id + 1). Streams with distinct ids are
// statistically independent, and the mapping does not depend on how work is
// scheduled across threads.
std::uint64_t splitmix64(std::uint64_t x) noexcept;
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream_id) noexcept;

using Engine = std::mt19937_64;

inline Engine make_engine(std::uint64_t seed, std::uint64_t stream_id) {
  return Engine(derive_seed(seed, stream_id));
}

}  // namespace hlpoly
