#include "qdlab/combdisc.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <sstream>

#include "qdlab/error.hpp"
#include "qdlab/random.hpp"

namespace qdlab {

namespace {

// element (0-based) -> indices of the sets containing it
std::vector<std::vector<int>> membership(const SetSystem& system) {
  std::vector<std::vector<int>> in(static_cast<std::size_t>(system.ground_size()));
  for (std::size_t s = 0; s < system.size(); ++s) {
    for (int i : system[s]) in[static_cast<std::size_t>(i - 1)].push_back(static_cast<int>(s));
  }
  return in;
}

Coloring uniform_coloring(int n, Rng& rng) {
  std::vector<int> signs(static_cast<std::size_t>(n));
  for (auto& s : signs) s = (rng() >> 63) ? 1 : -1;
  return Coloring(std::move(signs));
}

}  // namespace

int max_abs_imbalance(const SetSystem& system, const Coloring& coloring) {
  int best = 0;
  for (int s : evaluate_coloring(system, coloring)) best = std::max(best, std::abs(s));
  return best;
}

DiscResult disc_exact(const SetSystem& system, int cap) {
  const int n = system.ground_size();
  if (n > cap) {
    std::ostringstream os;
    os << "N = " << n << " exceeds the exhaustive cap " << cap;
    throw Error(ErrorCode::GroundSetTooLarge, os.str());
  }
  if (n > 62) throw Error(ErrorCode::GroundSetTooLarge, "N above 62 is not enumerable");

  const auto in = membership(system);
  const auto m = system.size();

  // Bit b of `mask` set <=> element b + 2 is colored -1. Element 1 stays +1.
  std::vector<int> sums(m);
  std::vector<int> hist(static_cast<std::size_t>(n) + 1, 0);
  int current_max = 0;
  for (std::size_t s = 0; s < m; ++s) {
    sums[s] = static_cast<int>(system[s].size());
    ++hist[static_cast<std::size_t>(sums[s])];
    current_max = std::max(current_max, sums[s]);
  }

  const int free_bits = n - 1;
  // Lexicographic key of the sign vector: element 2 is the most significant
  // digit and +1 ranks above -1.
  auto lex_key = [free_bits](std::uint64_t mask) {
    std::uint64_t key = 0;
    for (int b = 0; b < free_bits; ++b) {
      if (!((mask >> b) & 1U)) key |= std::uint64_t{1} << (free_bits - 1 - b);
    }
    return key;
  };

  std::uint64_t mask = 0;
  int best_value = current_max;
  std::uint64_t best_mask = 0;
  std::uint64_t best_key = lex_key(0);

  const std::uint64_t total = std::uint64_t{1} << free_bits;
  for (std::uint64_t step = 1; step < total; ++step) {
    const int bit = std::countr_zero(step);
    mask ^= std::uint64_t{1} << bit;
    const int delta = ((mask >> bit) & 1U) ? -2 : 2;
    for (int s : in[static_cast<std::size_t>(bit + 1)]) {
      auto& v = sums[static_cast<std::size_t>(s)];
      --hist[static_cast<std::size_t>(std::abs(v))];
      v += delta;
      const int a = std::abs(v);
      ++hist[static_cast<std::size_t>(a)];
      current_max = std::max(current_max, a);
    }
    while (current_max > 0 && hist[static_cast<std::size_t>(current_max)] == 0) --current_max;

    if (current_max < best_value) {
      best_value = current_max;
      best_mask = mask;
      best_key = lex_key(mask);
    } else if (current_max == best_value) {
      const std::uint64_t key = lex_key(mask);
      if (key < best_key) {
        best_key = key;
        best_mask = mask;
      }
    }
  }

  std::vector<int> signs(static_cast<std::size_t>(n), 1);
  for (int b = 0; b < free_bits; ++b) {
    if ((best_mask >> b) & 1U) signs[static_cast<std::size_t>(b + 1)] = -1;
  }
  return {best_value, Coloring(std::move(signs))};
}

std::vector<double> disc_random_bound(const SetSystem& system) {
  const auto m = system.size();
  if (m < 2) throw Error(ErrorCode::DegenerateM, "log M vanishes for M < 2");
  const double log_m = std::log(static_cast<double>(m));
  std::vector<double> thresholds;
  thresholds.reserve(m);
  for (const Subset& s : system.sets()) {
    thresholds.push_back(std::sqrt(2.0 * static_cast<double>(s.size()) * log_m));
  }
  return thresholds;
}

double random_bound_satisfaction(const SetSystem& system, int trials, std::uint64_t seed) {
  if (trials < 1) throw Error(ErrorCode::InvalidArgument, "trials must be >= 1");
  const auto thresholds = disc_random_bound(system);
  Rng rng = make_rng(seed);
  int satisfied = 0;
  for (int t = 0; t < trials; ++t) {
    const auto sums = evaluate_coloring(system, uniform_coloring(system.ground_size(), rng));
    bool ok = true;
    for (std::size_t s = 0; s < sums.size() && ok; ++s) {
      ok = std::abs(sums[s]) <= thresholds[s];
    }
    satisfied += ok ? 1 : 0;
  }
  return static_cast<double>(satisfied) / trials;
}

DiscResult disc_heuristic(const SetSystem& system, int trials, std::uint64_t seed) {
  if (trials < 1) throw Error(ErrorCode::InvalidArgument, "trials must be >= 1");
  const int n = system.ground_size();
  const auto in = membership(system);

  // Score: (max |chi(S)|, number of sets attaining it), compared lexicographically.
  auto score = [](const std::vector<int>& sums) {
    int mx = 0, cnt = 0;
    for (int v : sums) {
      const int a = std::abs(v);
      if (a > mx) {
        mx = a;
        cnt = 1;
      } else if (a == mx) {
        ++cnt;
      }
    }
    return std::pair{mx, cnt};
  };

  std::optional<DiscResult> best;
  for (int t = 0; t < trials; ++t) {
    Rng rng = make_rng(seed, static_cast<std::uint64_t>(t));
    Coloring start = uniform_coloring(n, rng);
    std::vector<int> signs(start.signs().begin(), start.signs().end());
    std::vector<int> sums = evaluate_coloring(system, start);
    auto current = score(sums);

    for (;;) {
      int best_flip = -1;
      auto best_score = current;
      for (int e = 0; e < n; ++e) {
        const int delta = -2 * signs[static_cast<std::size_t>(e)];
        for (int s : in[static_cast<std::size_t>(e)]) sums[static_cast<std::size_t>(s)] += delta;
        const auto cand = score(sums);
        for (int s : in[static_cast<std::size_t>(e)]) sums[static_cast<std::size_t>(s)] -= delta;
        if (cand < best_score) {
          best_score = cand;
          best_flip = e;
        }
      }
      if (best_flip < 0) break;
      const int delta = -2 * signs[static_cast<std::size_t>(best_flip)];
      for (int s : in[static_cast<std::size_t>(best_flip)]) sums[static_cast<std::size_t>(s)] += delta;
      signs[static_cast<std::size_t>(best_flip)] *= -1;
      current = best_score;
    }

    if (!best || current.first < best->value) {
      best = DiscResult{current.first, Coloring(signs)};
    }
  }
  return *best;
}

}  // namespace qdlab
