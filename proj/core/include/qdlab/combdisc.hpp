#pragma once

#include <cstdint>
#include <vector>

#include "qdlab/setsys.hpp"

namespace qdlab {

inline constexpr int kDefaultExhaustiveCap = 24;

struct DiscResult {
  int value;
  Coloring witness;
};

/// max over sets of |chi(S)|.
int max_abs_imbalance(const SetSystem& system, const Coloring& coloring);

/// Exact discrepancy by Gray-code enumeration of the 2^(N-1) colorings with
/// chi(1) = +1. Among optimal colorings the witness is the lexicographically
/// smallest sign vector (-1 < +1). Throws GroundSetTooLarge above `cap`.
DiscResult disc_exact(const SetSystem& system, int cap = kDefaultExhaustiveCap);

/// Per-set thresholds sqrt(2 |S| log M) of the random coloring bound.
/// Throws DegenerateM when M < 2.
std::vector<double> disc_random_bound(const SetSystem& system);

/// Fraction of `trials` uniform random colorings satisfying every
/// |chi(S)| <= sqrt(2 |S| log M) simultaneously.
double random_bound_satisfaction(const SetSystem& system, int trials, std::uint64_t seed);

/// Random restarts followed by best-improvement single-flip descent. Gives an
/// upper estimate of disc; the witness attains the returned value.
DiscResult disc_heuristic(const SetSystem& system, int trials, std::uint64_t seed);

}  // namespace qdlab
