#pragma once

#include <cstdint>
#include <vector>

#include "qdlab/matcore.hpp"
#include "qdlab/random.hpp"
#include "qdlab/setsys.hpp"

namespace qdlab {

/// Largest ground set for which exact_distribution enumerates 2^N subsets.
inline constexpr int kExactDistributionCap = 14;

/// Hermitian kernel of a determinantal point process on [N]: spectrum in
/// [0, 1]. Eigenvalues within kSpectralTolerance of 0 or 1 are snapped.
class DPPKernel {
 public:
  int dim() const noexcept { return matrix_.dim(); }
  const HermitianMatrix& hermitian() const noexcept { return matrix_; }
  const Matrix& matrix() const noexcept { return matrix_.matrix(); }
  /// Cached decomposition with snapped/clamped eigenvalues.
  const SpectralDecomposition& spectrum() const noexcept { return spectrum_; }

 private:
  DPPKernel(HermitianMatrix m, SpectralDecomposition sd)
      : matrix_(std::move(m)), spectrum_(std::move(sd)) {}
  friend DPPKernel validate_kernel(const HermitianMatrix& a);

  HermitianMatrix matrix_;
  SpectralDecomposition spectrum_;
};

/// Throws SpectrumOutOfRange naming the first offending eigenvalue.
DPPKernel validate_kernel(const HermitianMatrix& a);

struct ProcessSample {
  Subset points;  // sorted, 1-based
  friend bool operator==(const ProcessSample&, const ProcessSample&) = default;
};

/// Bitmask of a 1-based subset: bit i <-> element i + 1.
std::uint64_t subset_mask(const Subset& s);
Subset mask_subset(std::uint64_t mask, int n);

/// det K[T, T]; 1 for the empty set.
double joint_intensity(const DPPKernel& k, const Subset& t);

/// Exact spectral sampler: eigenvector j is kept with probability lambda_j,
/// then points are drawn one at a time from the kept projection kernel with
/// Gram-Schmidt downdating. Throws NumericalBreakdown if the residual mass
/// falls below 1e-12 before all points are placed.
ProcessSample sample(const DPPKernel& k, Rng& rng);
ProcessSample sample(const DPPKernel& k, std::uint64_t seed);

/// Principal submatrix K[S, S] as a kernel on S (positions follow S's order).
DPPKernel restrict_kernel(const DPPKernel& k, const Subset& s);

/// PMF of a sum of independent Bernoulli(p_i), by iterative convolution.
std::vector<double> poisson_binomial_pmf(const std::vector<double>& probabilities);

/// Law of |X|: Poisson-binomial over the kernel eigenvalues (length N + 1).
std::vector<double> size_pmf(const DPPKernel& k);

/// P[X = T] for every T, indexed by subset_mask(T), via Moebius inversion of
/// the joint intensities. Throws GroundSetTooLarge above kExactDistributionCap.
std::vector<double> exact_distribution(const DPPKernel& k);

/// E[(2 X(S) - |S|)^2] = 4[(tr(K P_S) - |S|/2)^2 + tr(K P_S (I - K P_S))].
double expected_squared_imbalance(const DPPKernel& k, const Subset& s);

struct CountMoments {
  double mean;
  double second_moment;
};

/// First two moments of X(S) from one- and two-point intensities.
CountMoments moments_of_count(const DPPKernel& k, const Subset& s);

}  // namespace qdlab
