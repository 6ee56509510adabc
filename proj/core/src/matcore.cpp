#include "qdlab/matcore.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "qdlab/error.hpp"

namespace qdlab {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonSquare: return "NonSquare";
    case ErrorCode::TooFarFromHermitian: return "TooFarFromHermitian";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::UnsupportedP: return "UnsupportedP";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::NotOrthonormal: return "NotOrthonormal";
    case ErrorCode::NotProjection: return "NotProjection";
    case ErrorCode::NotQuantumColoring: return "NotQuantumColoring";
    case ErrorCode::InvalidSetSystem: return "InvalidSetSystem";
    case ErrorCode::InvalidColoring: return "InvalidColoring";
    case ErrorCode::GroundSetTooLarge: return "GroundSetTooLarge";
    case ErrorCode::DegenerateM: return "DegenerateM";
    case ErrorCode::SpectrumOutOfRange: return "SpectrumOutOfRange";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::NumericalBreakdown: return "NumericalBreakdown";
    case ErrorCode::EmptyRestriction: return "EmptyRestriction";
    case ErrorCode::KernelInvalid: return "KernelInvalid";
    case ErrorCode::DegenerateDim: return "DegenerateDim";
    case ErrorCode::RankMismatch: return "RankMismatch";
    case ErrorCode::NonPositiveT: return "NonPositiveT";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ConditionViolated: return "ConditionViolated";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

HermitianMatrix HermitianMatrix::identity(int n) {
  return HermitianMatrix(Matrix::Identity(n, n));
}

HermitianMatrix HermitianMatrix::diagonal(const RealVector& diag) {
  return HermitianMatrix(diag.cast<Complex>().asDiagonal());
}

HermitianMatrix make_hermitian(const Matrix& raw) {
  if (raw.rows() != raw.cols() || raw.rows() == 0) {
    std::ostringstream os;
    os << "expected a non-empty square matrix, got " << raw.rows() << "x" << raw.cols();
    throw Error(ErrorCode::NonSquare, os.str());
  }
  const Matrix adj = raw.adjoint();
  const double anti = (0.5 * (raw - adj)).norm();
  const double scale = raw.norm();
  if (anti > kHermitianTolerance * scale) {
    std::ostringstream os;
    os << "anti-Hermitian part has norm " << anti << " against input norm " << scale;
    throw Error(ErrorCode::TooFarFromHermitian, os.str());
  }
  return HermitianMatrix(0.5 * (raw + adj));
}

Matrix SpectralDecomposition::reconstruct() const {
  return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
}

SpectralDecomposition spectral_decompose(const HermitianMatrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix());
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::ConvergenceFailure, "self-adjoint eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

namespace {

// Columns of `vectors` whose eigenvalue exceeds the midpoint 0.5.
Matrix columns_above_half(const SpectralDecomposition& sd, int& count) {
  count = 0;
  for (Eigen::Index i = 0; i < sd.eigenvalues.size(); ++i) {
    if (sd.eigenvalues(i) > 0.5) ++count;
  }
  // Eigenvalues ascend, so the selected columns are the trailing block.
  return sd.eigenvectors.rightCols(count);
}

}  // namespace

OrthogonalProjection OrthogonalProjection::from_matrix(const HermitianMatrix& p) {
  const SpectralDecomposition sd = spectral_decompose(p);
  for (Eigen::Index i = 0; i < sd.eigenvalues.size(); ++i) {
    const double l = sd.eigenvalues(i);
    if (std::abs(l) > kSpectralTolerance && std::abs(l - 1.0) > kSpectralTolerance) {
      std::ostringstream os;
      os << "eigenvalue " << l << " is not in {0,1}";
      throw Error(ErrorCode::NotProjection, os.str());
    }
  }
  int rank = 0;
  Matrix basis = columns_above_half(sd, rank);
  const Matrix& m = p.matrix();
  if ((m * m - m).norm() > kSpectralTolerance) {
    throw Error(ErrorCode::NotProjection, "P^2 differs from P");
  }
  if (std::abs(m.trace().real() - rank) > kSpectralTolerance) {
    throw Error(ErrorCode::NotProjection, "trace differs from rank");
  }
  return OrthogonalProjection(p, std::move(basis), rank);
}

OrthogonalProjection OrthogonalProjection::from_basis(const Matrix& columns) {
  const auto n = columns.rows();
  const auto r = columns.cols();
  if (n == 0) throw Error(ErrorCode::NotOrthonormal, "empty ambient dimension");
  if (r > n) throw Error(ErrorCode::NotOrthonormal, "more columns than rows");
  if (r > 0) {
    const double err = (columns.adjoint() * columns - Matrix::Identity(r, r)).norm();
    if (err > 1e-8) {
      std::ostringstream os;
      os << "||V*V - I||_F = " << err;
      throw Error(ErrorCode::NotOrthonormal, os.str());
    }
  }
  Matrix p = columns * columns.adjoint();
  return OrthogonalProjection(make_hermitian(p), columns, static_cast<int>(r));
}

OrthogonalProjection OrthogonalProjection::diagonal(std::span<const bool> indicator) {
  const auto n = static_cast<Eigen::Index>(indicator.size());
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "empty indicator");
  int rank = 0;
  for (bool b : indicator) rank += b ? 1 : 0;
  RealVector d(n);
  Matrix basis = Matrix::Zero(n, rank);
  int col = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    d(i) = indicator[static_cast<std::size_t>(i)] ? 1.0 : 0.0;
    if (indicator[static_cast<std::size_t>(i)]) basis(i, col++) = 1.0;
  }
  return OrthogonalProjection(HermitianMatrix::diagonal(d), std::move(basis), rank);
}

QuantumColoring QuantumColoring::from_matrix(const HermitianMatrix& chi) {
  const SpectralDecomposition sd = spectral_decompose(chi);
  for (Eigen::Index i = 0; i < sd.eigenvalues.size(); ++i) {
    const double l = sd.eigenvalues(i);
    if (std::abs(l - 1.0) > kSpectralTolerance && std::abs(l + 1.0) > kSpectralTolerance) {
      std::ostringstream os;
      os << "eigenvalue " << l << " is not in {-1,+1}";
      throw Error(ErrorCode::NotQuantumColoring, os.str());
    }
  }
  int k = 0;
  Matrix basis = columns_above_half(sd, k);
  const Matrix& m = chi.matrix();
  const auto n = m.rows();
  if ((m * m - Matrix::Identity(n, n)).norm() > kSpectralTolerance) {
    throw Error(ErrorCode::NotQuantumColoring, "chi^2 differs from I");
  }
  if (std::abs(m.trace().real() - (2.0 * k - static_cast<double>(n))) > kSpectralTolerance) {
    throw Error(ErrorCode::NotQuantumColoring, "trace differs from 2k - N");
  }
  return QuantumColoring(chi, std::move(basis), k);
}

QuantumColoring QuantumColoring::from_unitary(const Matrix& u, int plus_count) {
  const auto n = u.rows();
  if (u.cols() != n || n == 0) throw Error(ErrorCode::NonSquare, "unitary must be square");
  if (plus_count < 0 || plus_count > n) {
    throw Error(ErrorCode::InvalidArgument, "plus_count outside [0, N]");
  }
  RealVector d = RealVector::Constant(n, -1.0);
  d.head(plus_count).setOnes();
  Matrix chi = u * d.cast<Complex>().asDiagonal() * u.adjoint();
  HermitianMatrix h = make_hermitian(chi);
  const Matrix& m = h.matrix();
  if ((m * m - Matrix::Identity(n, n)).norm() > kSpectralTolerance) {
    throw Error(ErrorCode::NotQuantumColoring, "U is not unitary enough for chi^2 = I");
  }
  return QuantumColoring(std::move(h), u.leftCols(plus_count), plus_count);
}

QuantumColoring QuantumColoring::diagonal(std::span<const int> signs) {
  const auto n = static_cast<Eigen::Index>(signs.size());
  if (n == 0) throw Error(ErrorCode::InvalidColoring, "empty sign vector");
  RealVector d(n);
  int k = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const int s = signs[static_cast<std::size_t>(i)];
    if (s != 1 && s != -1) throw Error(ErrorCode::InvalidColoring, "signs must be +-1");
    d(i) = s;
    k += s == 1 ? 1 : 0;
  }
  Matrix basis = Matrix::Zero(n, k);
  int col = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (d(i) > 0) basis(i, col++) = 1.0;
  }
  return QuantumColoring(HermitianMatrix::diagonal(d), std::move(basis), k);
}

double schatten_norm(const Matrix& a, SchattenP p) {
  switch (p) {
    case SchattenP::Two:
      return a.norm();
    case SchattenP::One: {
      Eigen::JacobiSVD<Matrix> svd(a);
      return svd.singularValues().sum();
    }
    case SchattenP::Infinity: {
      if (a.size() == 0) return 0.0;
      Eigen::JacobiSVD<Matrix> svd(a);
      return svd.singularValues()(0);
    }
  }
  throw Error(ErrorCode::UnsupportedP, "unknown Schatten index");
}

double schatten_norm(const Matrix& a, double p) {
  if (p == 1.0) return schatten_norm(a, SchattenP::One);
  if (p == 2.0) return schatten_norm(a, SchattenP::Two);
  if (std::isinf(p) && p > 0) return schatten_norm(a, SchattenP::Infinity);
  std::ostringstream os;
  os << "p = " << p << " (supported: 1, 2, inf)";
  throw Error(ErrorCode::UnsupportedP, os.str());
}

Matrix commutator(const HermitianMatrix& a, const HermitianMatrix& b) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::DimMismatch, "commutator of different sizes");
  return a.matrix() * b.matrix() - b.matrix() * a.matrix();
}

OrthogonalProjection make_projection_from_vectors(const Matrix& columns) {
  return OrthogonalProjection::from_basis(columns);
}

bool is_unitary(const Matrix& u, double tol) {
  if (u.rows() != u.cols()) return false;
  return (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).norm() <= tol;
}

}  // namespace qdlab

namespace qdlab {

TraceTerms trace_terms(const QuantumColoring& chi, const OrthogonalProjection& p) {
  if (chi.dim() != p.dim()) throw Error(ErrorCode::DimMismatch, "coloring and projection sizes differ");
  const double r = p.rank();
  if (p.rank() == 0 || chi.plus_count() == 0) {
    // chi P = -P: traces -r and r.
    return {-r, r};
  }
  const Matrix c = p.range_basis().adjoint() * chi.plus_basis();
  const double c2 = c.squaredNorm();
  const double g2 = (c * c.adjoint()).squaredNorm();
  return {2.0 * c2 - r, 4.0 * g2 - 4.0 * c2 + r};
}

}  // namespace qdlab
