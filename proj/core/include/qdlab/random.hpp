#pragma once

#include <cstdint>
#include <random>

namespace qdlab {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Engine for stream `stream` of master seed `seed`. Streams with different
/// indices are statistically independent and do not depend on scheduling.
Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0);

/// Seed of a child stream, for nesting (seed, i) -> (seed', j).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

}  // namespace qdlab
