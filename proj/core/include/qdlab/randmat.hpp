#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qdlab/matcore.hpp"
#include "qdlab/random.hpp"
#include "qdlab/setsys.hpp"

namespace qdlab {

/// Haar unitary: QR of a complex Ginibre matrix with R's diagonal rotated to
/// the positive reals.
Matrix haar_unitary(int n, Rng& rng);
Matrix haar_unitary(int n, std::uint64_t seed);

/// chi = U D U*, D = diag(+1 x floor(N/2), -1 x ceil(N/2)). Requires N >= 2.
QuantumColoring random_quantum_coloring(int n, Rng& rng);
QuantumColoring random_quantum_coloring(int n, std::uint64_t seed);

/// Projection onto a Haar-random subspace of dimension floor(N/2). N >= 2.
OrthogonalProjection random_projection(int n, Rng& rng);
OrthogonalProjection random_projection(int n, std::uint64_t seed);

/// M independent random projections; projection j uses stream j of `seed`.
ProjectionSystem random_projection_system(int n, int m, std::uint64_t seed);

/// E[tr(chi P)] for a random quantum coloring and a fixed rank-r projection:
/// tr(D) r / N, i.e. 0 for even N and -r/N for odd N.
double exact_mean_trace(int n, int r);

/// E[tr((chi P)^2)]: (N r^2 - r)/(N^2 - 1) for even N, r^2/N for odd N.
double exact_mean_trace_sq(int n, int r);

/// E[tr((chi P)^2)] for a fixed coloring with trace `trace_chi` and a random
/// projection of rank floor(N/2).
double exact_mean_trace_sq_fixed_coloring(int n, int trace_chi);

struct HaarFourthMoments {
  double abs4;              // E|U_ij|^4
  double abs2_shared_line;  // E|U_ij|^2 |U_in|^2 = E|U_ij|^2 |U_mj|^2
  double abs2_disjoint;     // E|U_ij|^2 |U_mn|^2, i != m, j != n
  double cross;             // E[U_ij U_mn conj(U_mj) conj(U_in)]
};

HaarFourthMoments haar_fourth_moments(int n);

struct TailRow {
  double delta;
  double tail_trace;       // P[|f1 - E f1| >= delta N], f1 = tr(chi P)
  double tail_commutator;  // same for f2 = tr(P - (chi P)^2)
};

struct ConcentrationFit {
  /// Largest c with tail <= 2 exp(-c N^2 delta^2) at every grid point with a
  /// nonzero tail; infinity when every tail is zero.
  double c_valid;
  /// Least-squares slope of -log(tail / 2) against N^2 delta^2 (diagnostic).
  double c_least_squares;
  int points_used;
};

struct ConcentrationProbe {
  int n;
  int rank;
  int trials;
  double exact_mean_trace;
  double exact_mean_commutator;
  double empirical_mean_trace;
  double empirical_mean_commutator;
  std::vector<TailRow> rows;
  ConcentrationFit trace_fit;
  ConcentrationFit commutator_fit;

  /// min of the two valid constants; the single c used for Delta_P.
  double c_hat() const;
};

/// Empirical tails of tr(chi P) and tr(P - (chi P)^2) over random colorings,
/// with P a fixed random projection of rank floor(N/2). Requires trials >= 1000.
ConcentrationProbe concentration_probe(int n, int trials, std::span<const double> deltas,
                                       std::uint64_t seed, int threads = 1);

/// delta grid 0.025, 0.05, ..., 0.5.
std::vector<double> default_delta_grid();

}  // namespace qdlab
