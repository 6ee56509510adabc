#include "qdlab/dpp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qdlab/error.hpp"

namespace qdlab {

namespace {

void check_subset(const Subset& s, int n) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] < 1 || s[i] > n) {
      std::ostringstream os;
      os << "index " << s[i] << " outside [1, " << n << "]";
      throw Error(ErrorCode::IndexOutOfRange, os.str());
    }
    if (i > 0 && s[i] <= s[i - 1]) {
      throw Error(ErrorCode::InvalidArgument, "subset must be sorted and duplicate-free");
    }
  }
}

Matrix principal_submatrix(const Matrix& m, const Subset& s) {
  const auto r = static_cast<Eigen::Index>(s.size());
  Matrix sub(r, r);
  for (Eigen::Index a = 0; a < r; ++a) {
    for (Eigen::Index b = 0; b < r; ++b) {
      sub(a, b) = m(s[static_cast<std::size_t>(a)] - 1, s[static_cast<std::size_t>(b)] - 1);
    }
  }
  return sub;
}

double hermitian_det(const Matrix& m) {
  if (m.rows() == 0) return 1.0;
  return Eigen::PartialPivLU<Matrix>(m).determinant().real();
}

}  // namespace

DPPKernel validate_kernel(const HermitianMatrix& a) {
  SpectralDecomposition sd = spectral_decompose(a);
  for (Eigen::Index i = 0; i < sd.eigenvalues.size(); ++i) {
    double& l = sd.eigenvalues(i);
    if (l < -kSpectralTolerance || l > 1.0 + kSpectralTolerance) {
      std::ostringstream os;
      os << "eigenvalue " << l << " outside [0, 1]";
      throw Error(ErrorCode::SpectrumOutOfRange, os.str());
    }
    if (std::abs(l) <= kSpectralTolerance) l = 0.0;
    if (std::abs(l - 1.0) <= kSpectralTolerance) l = 1.0;
  }
  return DPPKernel(a, std::move(sd));
}

std::uint64_t subset_mask(const Subset& s) {
  std::uint64_t mask = 0;
  for (int i : s) mask |= std::uint64_t{1} << (i - 1);
  return mask;
}

Subset mask_subset(std::uint64_t mask, int n) {
  Subset s;
  for (int i = 0; i < n; ++i) {
    if ((mask >> i) & 1U) s.push_back(i + 1);
  }
  return s;
}

double joint_intensity(const DPPKernel& k, const Subset& t) {
  check_subset(t, k.dim());
  return hermitian_det(principal_submatrix(k.matrix(), t));
}

ProcessSample sample(const DPPKernel& k, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto& sd = k.spectrum();
  const auto n = sd.eigenvalues.size();

  std::vector<Eigen::Index> kept;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double l = sd.eigenvalues(j);
    if (l >= 1.0 || (l > 0.0 && unit(rng) < l)) kept.push_back(j);
  }

  Matrix v(n, static_cast<Eigen::Index>(kept.size()));
  for (std::size_t c = 0; c < kept.size(); ++c) {
    v.col(static_cast<Eigen::Index>(c)) = sd.eigenvectors.col(kept[c]);
  }

  Subset points;
  points.reserve(kept.size());
  RealVector weights(n);
  while (v.cols() > 0) {
    weights = v.rowwise().squaredNorm();
    const double total = weights.sum();
    if (total < 1e-12) {
      throw Error(ErrorCode::NumericalBreakdown, "residual projection mass vanished");
    }
    // Conditional law of the next point: row norms of the current basis,
    // renormalized to absorb rounding drift.
    const double u = unit(rng) * total;
    Eigen::Index chosen = n - 1;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      acc += weights(i);
      if (u < acc) {
        chosen = i;
        break;
      }
    }
    while (weights(chosen) <= 0.0) --chosen;
    points.push_back(static_cast<int>(chosen) + 1);

    // Restrict the span to vectors vanishing at `chosen`: eliminate that
    // coordinate with the pivot column, drop the pivot, re-orthonormalize.
    Eigen::Index pivot = 0;
    v.row(chosen).cwiseAbs().maxCoeff(&pivot);
    const Vector pivot_col = v.col(pivot) / v(chosen, pivot);
    Matrix next(n, v.cols() - 1);
    for (Eigen::Index c = 0, d = 0; c < v.cols(); ++c) {
      if (c == pivot) continue;
      next.col(d++) = v.col(c) - pivot_col * v(chosen, c);
    }
    for (Eigen::Index c = 0; c < next.cols(); ++c) {
      // Two Gram-Schmidt passes keep the basis orthonormal to rounding.
      for (int pass = 0; pass < 2; ++pass) {
        for (Eigen::Index prev = 0; prev < c; ++prev) {
          next.col(c) -= next.col(prev) * next.col(prev).dot(next.col(c));
        }
      }
      const double norm = next.col(c).norm();
      if (norm < 1e-12) {
        throw Error(ErrorCode::NumericalBreakdown, "downdated basis lost rank");
      }
      next.col(c) /= norm;
    }
    v = std::move(next);
  }
  std::sort(points.begin(), points.end());
  return {std::move(points)};
}

ProcessSample sample(const DPPKernel& k, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  return sample(k, rng);
}

DPPKernel restrict_kernel(const DPPKernel& k, const Subset& s) {
  if (s.empty()) throw Error(ErrorCode::EmptyRestriction, "restriction to the empty set");
  check_subset(s, k.dim());
  return validate_kernel(make_hermitian(principal_submatrix(k.matrix(), s)));
}

std::vector<double> poisson_binomial_pmf(const std::vector<double>& probabilities) {
  std::vector<double> pmf{1.0};
  pmf.reserve(probabilities.size() + 1);
  for (double p : probabilities) {
    pmf.push_back(0.0);
    for (std::size_t j = pmf.size() - 1; j > 0; --j) {
      pmf[j] = pmf[j] * (1.0 - p) + pmf[j - 1] * p;
    }
    pmf[0] *= 1.0 - p;
  }
  return pmf;
}

std::vector<double> size_pmf(const DPPKernel& k) {
  const auto& l = k.spectrum().eigenvalues;
  return poisson_binomial_pmf(std::vector<double>(l.data(), l.data() + l.size()));
}

std::vector<double> exact_distribution(const DPPKernel& k) {
  const int n = k.dim();
  if (n > kExactDistributionCap) {
    std::ostringstream os;
    os << "N = " << n << " exceeds the enumeration cap " << kExactDistributionCap;
    throw Error(ErrorCode::GroundSetTooLarge, os.str());
  }
  const std::size_t count = std::size_t{1} << n;
  std::vector<double> f(count);
  for (std::size_t mask = 0; mask < count; ++mask) {
    f[mask] = hermitian_det(principal_submatrix(k.matrix(), mask_subset(mask, n)));
  }
  // P[X = T] = sum over U ⊇ T of (-1)^{|U \ T|} det K[U, U].
  for (int b = 0; b < n; ++b) {
    const std::size_t bit = std::size_t{1} << b;
    for (std::size_t mask = 0; mask < count; ++mask) {
      if (!(mask & bit)) f[mask] -= f[mask | bit];
    }
  }
  return f;
}

double expected_squared_imbalance(const DPPKernel& k, const Subset& s) {
  check_subset(s, k.dim());
  const auto n = static_cast<Eigen::Index>(k.dim());
  RealVector indicator = RealVector::Zero(n);
  for (int i : s) indicator(i - 1) = 1.0;
  const Matrix kp = k.matrix() * indicator.cast<Complex>().asDiagonal();
  const double bias = kp.trace().real() - 0.5 * static_cast<double>(s.size());
  const double variance = (kp - kp * kp).trace().real();
  return 4.0 * (bias * bias + variance);
}

CountMoments moments_of_count(const DPPKernel& k, const Subset& s) {
  check_subset(s, k.dim());
  const Matrix& m = k.matrix();
  double mean = 0.0;
  for (int i : s) mean += m(i - 1, i - 1).real();
  double pairs = 0.0;
  for (int i : s) {
    for (int j : s) {
      if (i == j) continue;
      pairs += m(i - 1, i - 1).real() * m(j - 1, j - 1).real() - std::norm(m(i - 1, j - 1));
    }
  }
  return {mean, mean + pairs};
}

}  // namespace qdlab
