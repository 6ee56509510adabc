#pragma once

#include <complex>
#include <span>

#include <Eigen/Dense>

namespace qdlab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Absolute tolerance for eigenvalue-class membership ({0,1} or {-1,+1}) and
/// for the algebraic identities P^2 = P, chi^2 = I.
inline constexpr double kSpectralTolerance = 1e-10;

/// Relative Frobenius size of the anti-Hermitian part that make_hermitian
/// still accepts (and removes).
inline constexpr double kHermitianTolerance = 1e-6;

/// Dense complex Hermitian matrix. Immutable; always exactly Hermitian
/// because construction symmetrizes as (A + A*)/2.
class HermitianMatrix {
 public:
  static HermitianMatrix identity(int n);
  static HermitianMatrix diagonal(const RealVector& diag);

  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const noexcept { return m_; }
  Complex operator()(int i, int j) const { return m_(i, j); }

 private:
  explicit HermitianMatrix(Matrix m) : m_(std::move(m)) {}
  friend HermitianMatrix make_hermitian(const Matrix& raw);

  Matrix m_;
};

/// Symmetrizes `raw`. Throws NonSquare, or TooFarFromHermitian when the
/// anti-Hermitian part exceeds kHermitianTolerance relative to ||raw||_F.
HermitianMatrix make_hermitian(const Matrix& raw);

struct SpectralDecomposition {
  RealVector eigenvalues;  // ascending
  Matrix eigenvectors;     // unitary, columns match eigenvalues

  Matrix reconstruct() const;
};

SpectralDecomposition spectral_decompose(const HermitianMatrix& a);

/// Orthogonal projection of C^N, stored together with an orthonormal basis of
/// its range.
class OrthogonalProjection {
 public:
  /// Validates spectrum in {0,1}, P^2 = P and tr P = rank.
  static OrthogonalProjection from_matrix(const HermitianMatrix& p);

  /// P = sum of v v* over the (orthonormal) columns. Throws NotOrthonormal.
  static OrthogonalProjection from_basis(const Matrix& columns);

  /// Diagonal 0/1 projection; `indicator[i]` selects coordinate i.
  static OrthogonalProjection diagonal(std::span<const bool> indicator);

  int dim() const noexcept { return matrix_.dim(); }
  int rank() const noexcept { return rank_; }
  const HermitianMatrix& hermitian() const noexcept { return matrix_; }
  const Matrix& matrix() const noexcept { return matrix_.matrix(); }
  const Matrix& range_basis() const noexcept { return basis_; }

 private:
  OrthogonalProjection(HermitianMatrix m, Matrix basis, int rank)
      : matrix_(std::move(m)), basis_(std::move(basis)), rank_(rank) {}

  HermitianMatrix matrix_;
  Matrix basis_;
  int rank_;
};

/// Hermitian matrix with spectrum in {-1,+1} (chi^2 = I).
class QuantumColoring {
 public:
  static QuantumColoring from_matrix(const HermitianMatrix& chi);

  /// chi = U diag(+1 x plus_count, -1 x (N - plus_count)) U*.
  static QuantumColoring from_unitary(const Matrix& u, int plus_count);

  /// Diagonal coloring from a +-1 sign vector.
  static QuantumColoring diagonal(std::span<const int> signs);

  int dim() const noexcept { return matrix_.dim(); }
  int plus_count() const noexcept { return plus_count_; }
  const HermitianMatrix& hermitian() const noexcept { return matrix_; }
  const Matrix& matrix() const noexcept { return matrix_.matrix(); }
  /// Orthonormal basis of the +1 eigenspace (N x plus_count).
  const Matrix& plus_basis() const noexcept { return plus_basis_; }

 private:
  QuantumColoring(HermitianMatrix m, Matrix plus_basis, int plus_count)
      : matrix_(std::move(m)), plus_basis_(std::move(plus_basis)), plus_count_(plus_count) {}

  HermitianMatrix matrix_;
  Matrix plus_basis_;
  int plus_count_;
};

enum class SchattenP { One, Two, Infinity };

double schatten_norm(const Matrix& a, SchattenP p);

/// Numeric overload; accepts p in {1, 2, +inf}, otherwise UnsupportedP.
double schatten_norm(const Matrix& a, double p);

/// AB - BA. Throws DimMismatch.
Matrix commutator(const HermitianMatrix& a, const HermitianMatrix& b);

/// Same as OrthogonalProjection::from_basis.
OrthogonalProjection make_projection_from_vectors(const Matrix& columns);

/// ||U*U - I||_F <= tol.
bool is_unitary(const Matrix& u, double tol = kSpectralTolerance);

}  // namespace qdlab

namespace qdlab {

/// tr(chi P) and tr((chi P)^2), computed from the range bases: with
/// C = V* U_+ (V spans P, U_+ spans the +1 eigenspace of chi),
/// tr(chi P) = 2||C||^2 - r and tr((chi P)^2) = 4||C C*||^2 - 4||C||^2 + r.
struct TraceTerms {
  double trace;
  double trace_sq;
};

TraceTerms trace_terms(const QuantumColoring& chi, const OrthogonalProjection& p);

}  // namespace qdlab
