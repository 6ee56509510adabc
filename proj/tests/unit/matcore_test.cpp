#include <doctest.h>

#include <cmath>
#include <limits>

#include "helpers.hpp"
#include "qdlab/error.hpp"
#include "qdlab/matcore.hpp"

using namespace qdlab;
using namespace testing_support;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected qdlab::Error");
  return ErrorCode::InvalidArgument;
}

Matrix m2(Complex a, Complex b, Complex c, Complex d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace

TEST_SUITE("matcore") {
  TEST_CASE("make_hermitian accepts scalars and Hermitian input") {
    Matrix s(1, 1);
    s(0, 0) = 3.0;
    CHECK(make_hermitian(s)(0, 0) == Complex(3.0, 0.0));

    const Complex i(0.0, 1.0);
    const Matrix y = m2(0.0, i, -i, 0.0);
    CHECK((make_hermitian(y).matrix() - y).norm() == 0.0);
  }

  TEST_CASE("make_hermitian rejects bad input") {
    CHECK(code_of([] { make_hermitian(m2(0.0, 1.0, 0.0, 0.0)); }) == ErrorCode::TooFarFromHermitian);
    CHECK(code_of([] { make_hermitian(Matrix::Zero(2, 3)); }) == ErrorCode::NonSquare);
  }

  TEST_CASE("make_hermitian symmetrizes small asymmetry") {
    Matrix a = m2(1.0, Complex(2.0, 1e-9), Complex(2.0, 0.0), 4.0);
    const HermitianMatrix h = make_hermitian(a);
    CHECK(std::abs(h(0, 1) - std::conj(h(1, 0))) < 1e-15);
  }

  TEST_CASE("spectral_decompose hand examples") {
    auto ev = spectral_decompose(HermitianMatrix::identity(3)).eigenvalues;
    for (int i = 0; i < 3; ++i) CHECK(ev(i) == doctest::Approx(1.0));

    RealVector d(2);
    d << 2.0, -1.0;
    ev = spectral_decompose(HermitianMatrix::diagonal(d)).eigenvalues;
    CHECK(ev(0) == doctest::Approx(-1.0));
    CHECK(ev(1) == doctest::Approx(2.0));

    ev = spectral_decompose(make_hermitian(m2(0.0, 1.0, 1.0, 0.0))).eigenvalues;
    CHECK(ev(0) == doctest::Approx(-1.0));
    CHECK(ev(1) == doctest::Approx(1.0));
  }

  TEST_CASE("spectral reconstruction is accurate up to N = 64") {
    Rng rng = make_rng(101);
    for (int n : {1, 2, 5, 16, 64}) {
      const HermitianMatrix a = random_hermitian(n, rng);
      const SpectralDecomposition sd = spectral_decompose(a);
      CHECK((sd.reconstruct() - a.matrix()).norm() <= 1e-9);
      for (int i = 1; i < n; ++i) CHECK(sd.eigenvalues(i - 1) <= sd.eigenvalues(i));
    }
  }

  TEST_CASE("schatten norms") {
    CHECK(schatten_norm(m2(1.0, 0.0, 0.0, -1.0), SchattenP::One) == doctest::Approx(2.0));
    CHECK(schatten_norm(m2(3.0, 0.0, 0.0, 4.0), SchattenP::Two) == doctest::Approx(5.0));
    CHECK(schatten_norm(m2(3.0, 0.0, 0.0, 4.0), SchattenP::Infinity) == doctest::Approx(4.0));
    CHECK(schatten_norm(m2(3.0, 0.0, 0.0, 4.0), 2.0) == doctest::Approx(5.0));
    CHECK(schatten_norm(m2(3.0, 0.0, 0.0, 4.0), std::numeric_limits<double>::infinity()) == doctest::Approx(4.0));
    CHECK(code_of([] { schatten_norm(Matrix::Identity(2, 2), 3.0); }) == ErrorCode::UnsupportedP);

    Rng rng = make_rng(7);
    for (int t = 0; t < 20; ++t) {
      const QuantumColoring chi = random_coloring(6, t % 7, rng);
      CHECK(schatten_norm(chi.matrix(), SchattenP::Infinity) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }

  TEST_CASE("matrix Hoelder inequality on random pairs") {
    Rng rng = make_rng(8);
    const SchattenP pairs[3][2] = {{SchattenP::One, SchattenP::Infinity},
                                   {SchattenP::Two, SchattenP::Two},
                                   {SchattenP::Infinity, SchattenP::One}};
    int violations = 0;
    for (int t = 0; t < 1000; ++t) {
      const int n = 2 + t % 5;
      const Matrix p = ginibre(n, n, rng);
      const Matrix q = ginibre(n, n, rng);
      const double lhs = std::abs((p.adjoint() * q).trace());
      for (const auto& pq : pairs) {
        if (lhs > schatten_norm(p, pq[0]) * schatten_norm(q, pq[1]) + 1e-9) ++violations;
      }
    }
    CHECK(violations == 0);
  }

  TEST_CASE("commutator examples") {
    Rng rng = make_rng(3);
    const HermitianMatrix a = random_hermitian(4, rng);
    CHECK(commutator(a, HermitianMatrix::identity(4)).norm() == 0.0);

    RealVector d1(3), d2(3);
    d1 << 1, 2, 3;
    d2 << -1, 5, 0.5;
    CHECK(commutator(HermitianMatrix::diagonal(d1), HermitianMatrix::diagonal(d2)).norm() == 0.0);

    RealVector e(2);
    e << 1, 0;
    const Matrix c = commutator(make_hermitian(m2(0.0, 1.0, 1.0, 0.0)), HermitianMatrix::diagonal(e));
    CHECK((c - m2(0.0, -1.0, 1.0, 0.0)).norm() < 1e-15);

    CHECK(code_of([&] { commutator(a, HermitianMatrix::identity(2)); }) == ErrorCode::DimMismatch);
  }

  TEST_CASE("projections from vectors") {
    Matrix e1 = Matrix::Zero(2, 1);
    e1(0, 0) = 1.0;
    const OrthogonalProjection p1 = make_projection_from_vectors(e1);
    CHECK((p1.matrix() - m2(1.0, 0.0, 0.0, 0.0)).norm() < 1e-15);
    CHECK(p1.rank() == 1);

    const OrthogonalProjection full = make_projection_from_vectors(Matrix::Identity(4, 4));
    CHECK((full.matrix() - Matrix::Identity(4, 4)).norm() < 1e-15);
    CHECK(full.rank() == 4);

    Matrix v(2, 1);
    v << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    CHECK((make_projection_from_vectors(v).matrix() - m2(0.5, 0.5, 0.5, 0.5)).norm() < 1e-15);

    Matrix bad(2, 2);
    bad << 1.0, 1.0, 0.0, 1.0;
    CHECK(code_of([&] { make_projection_from_vectors(bad); }) == ErrorCode::NotOrthonormal);
  }

  TEST_CASE("projection and coloring validation") {
    CHECK(code_of([] { OrthogonalProjection::from_matrix(make_hermitian(0.5 * Matrix::Identity(2, 2))); }) ==
          ErrorCode::NotProjection);
    CHECK(code_of([] { QuantumColoring::from_matrix(make_hermitian(0.5 * Matrix::Identity(2, 2))); }) ==
          ErrorCode::NotQuantumColoring);

    const QuantumColoring x = QuantumColoring::from_matrix(make_hermitian(m2(0.0, 1.0, 1.0, 0.0)));
    CHECK(x.plus_count() == 1);
    const int signs[] = {1, -1, -1};
    const QuantumColoring d = QuantumColoring::diagonal(signs);
    CHECK(d.plus_count() == 1);
    CHECK(d.matrix().trace().real() == doctest::Approx(-1.0));

    const bool ind[] = {false, true, true};
    const OrthogonalProjection p = OrthogonalProjection::diagonal(ind);
    CHECK(p.rank() == 2);
    CHECK(p.matrix()(0, 0) == Complex(0.0));
  }

  TEST_CASE("trace quantities are real and bounded") {
    Rng rng = make_rng(44);
    for (int t = 0; t < 300; ++t) {
      const int n = 1 + t % 8;
      const QuantumColoring chi = random_coloring(n, static_cast<int>(rng() % (n + 1)), rng);
      const OrthogonalProjection p = random_rank_projection(n, static_cast<int>(rng() % (n + 1)), rng);
      const Matrix a = chi.matrix() * p.matrix();
      const Complex t1 = a.trace();
      const Complex t2 = (a * a).trace();
      CHECK(std::abs(t1.imag()) <= 1e-10);
      CHECK(std::abs(t2.imag()) <= 1e-10);
      CHECK(t2.real() <= p.rank() + 1e-9);

      const TraceTerms fast = trace_terms(chi, p);
      CHECK(fast.trace == doctest::Approx(t1.real()).epsilon(1e-9));
      CHECK(std::abs(fast.trace_sq - t2.real()) <= 1e-9);

      CHECK((p.matrix() * p.matrix() - p.matrix()).norm() <= 1e-10);
      CHECK((chi.matrix() * chi.matrix() - Matrix::Identity(n, n)).norm() <= 1e-10);
    }
  }

  TEST_CASE("is_unitary") {
    Rng rng = make_rng(2);
    CHECK(is_unitary(haar_unitary(5, rng)));
    CHECK_FALSE(is_unitary(2.0 * Matrix::Identity(3, 3)));
  }
}
