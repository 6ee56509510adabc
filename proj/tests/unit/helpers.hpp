#pragma once

#include <random>

#include "qdlab/dpp.hpp"
#include "qdlab/matcore.hpp"
#include "qdlab/randmat.hpp"
#include "qdlab/random.hpp"

namespace testing_support {

using namespace qdlab;

inline Matrix ginibre(int n, int m, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix a(n, m);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) a(i, j) = Complex(g(rng), g(rng));
  }
  return a;
}

inline HermitianMatrix random_hermitian(int n, Rng& rng) {
  const Matrix a = ginibre(n, n, rng);
  return make_hermitian(0.5 * (a + a.adjoint()));
}

/// Kernel V diag(lambda) V* with lambda uniform in [0, 1].
inline DPPKernel random_kernel(int n, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Matrix v = haar_unitary(n, rng);
  Matrix d = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) d(i, i) = u(rng);
  return validate_kernel(make_hermitian(v * d * v.adjoint()));
}

/// Projection onto the span of r Gaussian vectors.
inline OrthogonalProjection random_rank_projection(int n, int r, Rng& rng) {
  if (r == 0) return OrthogonalProjection::from_matrix(make_hermitian(Matrix::Zero(n, n)));
  const Matrix q = Eigen::HouseholderQR<Matrix>(ginibre(n, r, rng)).householderQ() * Matrix::Identity(n, r);
  return make_projection_from_vectors(q);
}

inline QuantumColoring random_coloring(int n, int k, Rng& rng) {
  return QuantumColoring::from_unitary(haar_unitary(n, rng), k);
}

inline Subset random_subset(int n, Rng& rng) {
  Subset s;
  for (int i = 1; i <= n; ++i) {
    if (rng() >> 63) s.push_back(i);
  }
  return s;
}

}  // namespace testing_support
