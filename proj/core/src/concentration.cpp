#include "qdlab/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qdlab/error.hpp"

namespace qdlab {

double bernstein_tail(std::span<const double> variances, double bound_k, double t) {
  if (!(t > 0.0)) throw Error(ErrorCode::NonPositiveT, "t must be positive");
  if (!(bound_k > 0.0)) throw Error(ErrorCode::InvalidArgument, "K must be positive");
  double total = 0.0;
  for (double v : variances) {
    if (v < 0.0) throw Error(ErrorCode::InvalidArgument, "variances must be non-negative");
    total += v;
  }
  const double linear = t / (2.0 * bound_k);
  const double exponent = total > 0.0 ? std::min(t * t / (4.0 * total), linear) : linear;
  return 2.0 * std::exp(-exponent);
}

double comparison_factor(std::size_t m, double c, ComparisonVariant variant) {
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "M must be >= 1");
  if (!(c > 0.0)) throw Error(ErrorCode::InvalidArgument, "c must be positive");
  const double l = std::log(2.0 * static_cast<double>(m));
  return 2.0 * c * (variant == ComparisonVariant::Log ? l : std::sqrt(l)) + 1.0;
}

std::vector<double> default_c_grid() {
  std::vector<double> grid(25);
  for (int i = 0; i < 25; ++i) grid[static_cast<std::size_t>(i)] = 0.01 * std::pow(10.0, 4.0 * i / 24.0);
  return grid;
}

namespace {

std::optional<double> smallest_feasible(std::span<const double> grid, std::size_t m, int disc, double q,
                                        ComparisonVariant variant) {
  std::vector<double> sorted(grid.begin(), grid.end());
  std::sort(sorted.begin(), sorted.end());
  for (double c : sorted) {
    if (disc <= comparison_factor(m, c, variant) * q + 1e-9) return c;
  }
  return std::nullopt;
}

}  // namespace

ComparisonReport comparison_check(const SetSystem& system, std::span<const double> c_grid, QdiscOptions options,
                                  int cap) {
  const DiscResult exact = disc_exact(system, cap);
  options.warm_starts.push_back(QuantumColoring::diagonal(exact.witness.signs()));
  const QdiscEstimate est = qdisc_estimate(to_projection_system(system), options);

  ComparisonReport rep{system.ground_size(), system.size(), exact.value, exact.witness, est.value,
                       est.value <= exact.value + 1e-9, std::nullopt, std::nullopt};
  rep.min_c_log = smallest_feasible(c_grid, system.size(), exact.value, est.value, ComparisonVariant::Log);
  rep.min_c_sqrt_log = smallest_feasible(c_grid, system.size(), exact.value, est.value, ComparisonVariant::SqrtLog);
  return rep;
}

LowerBoundConstants lower_bound_constants(double alpha) {
  if (!(alpha > 0.0)) throw Error(ErrorCode::InvalidArgument, "alpha must be positive");
  const double epsilon = 1.0 / 20.0;
  const double zeta = 1.0 / (2.0 * std::sqrt(10.0 * (1.0 + alpha)));
  const double margin = 0.2 - zeta * zeta * (1.0 + alpha) - 2.0 * epsilon;
  if (!(margin > 0.0)) throw Error(ErrorCode::ConditionViolated, "1/5 - zeta^2 (1 + alpha) - 2 epsilon <= 0");
  return {epsilon, zeta, margin};
}

}  // namespace qdlab
