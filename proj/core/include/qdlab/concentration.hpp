#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "qdlab/combdisc.hpp"
#include "qdlab/qdisc.hpp"
#include "qdlab/setsys.hpp"

namespace qdlab {

/// 2 exp(-min(t^2 / (4 sum E[X_i^2]), t / (2K))) for centered independent
/// variables with |X_i| <= K.
double bernstein_tail(std::span<const double> variances, double bound_k, double t);

enum class ComparisonVariant { Log, SqrtLog };

/// 2c log(2M) + 1 (Log) or 2c sqrt(log(2M)) + 1 (SqrtLog).
double comparison_factor(std::size_t m, double c, ComparisonVariant variant);

/// Geometric grid from 0.01 to 100 with 25 points.
std::vector<double> default_c_grid();

struct ComparisonReport {
  int n;
  std::size_t m;
  int disc;
  Coloring disc_witness;
  double qdisc_estimate;
  bool sandwich_holds;  // qdisc_estimate <= disc + 1e-9
  /// Smallest grid c with disc <= factor * qdisc_estimate, if any.
  std::optional<double> min_c_log;
  std::optional<double> min_c_sqrt_log;
};

/// The combinatorial witness is always added as a warm start, so the sandwich
/// holds by construction up to rounding.
ComparisonReport comparison_check(const SetSystem& system, std::span<const double> c_grid,
                                  QdiscOptions options = {}, int cap = kDefaultExhaustiveCap);

struct LowerBoundConstants {
  double epsilon;
  double zeta;
  double condition_margin;  // 1/5 - zeta^2 (1 + alpha) - 2 epsilon
};

LowerBoundConstants lower_bound_constants(double alpha);

}  // namespace qdlab
