#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "qdlab/error.hpp"
#include "qdlab/randmat.hpp"

using namespace qdlab;
using namespace testing_support;

namespace {

struct Stat {
  double sum = 0.0, sum_sq = 0.0;
  int n = 0;
  void add(double x) {
    sum += x;
    sum_sq += x * x;
    ++n;
  }
  double mean() const { return sum / n; }
  double se() const { return std::sqrt(std::max(0.0, sum_sq / n - mean() * mean()) / n); }
};

void check_within(const Stat& s, double exact, double sigmas = 4.0) {
  const double se = s.se();
  if (se < 1e-12) {
    CHECK(std::abs(s.mean() - exact) <= 1e-9);
  } else {
    CHECK(std::abs(s.mean() - exact) <= sigmas * se);
  }
}

}  // namespace

TEST_SUITE("randmat") {
  TEST_CASE("Haar unitaries are unitary with unit determinant modulus") {
    Rng rng = make_rng(1);
    for (int n : {1, 2, 3, 8, 20}) {
      const Matrix u = haar_unitary(n, rng);
      CHECK((u.adjoint() * u - Matrix::Identity(n, n)).norm() <= 1e-10);
      CHECK(std::abs(std::abs(u.determinant()) - 1.0) <= 1e-9);
    }
    CHECK(std::abs(std::abs(haar_unitary(1, 5)(0, 0)) - 1.0) <= 1e-12);
    CHECK((haar_unitary(4, 9) - haar_unitary(4, 9)).norm() == 0.0);
  }

  TEST_CASE("first moment and phase correction") {
    // Without the phase fix the diagonal of QR's Q is biased; E U_11 = 0 for Haar.
    Stat abs2, re11;
    Rng rng = make_rng(2);
    const int n = 3;
    Matrix w = haar_unitary(n, rng);  // fixed unitary for the invariance check
    Stat left;
    for (int t = 0; t < 20000; ++t) {
      const Matrix u = haar_unitary(n, rng);
      abs2.add(std::norm(u(0, 0)));
      re11.add(u(0, 0).real());
      left.add(std::norm((w * u)(0, 0)));
    }
    check_within(abs2, 1.0 / n);
    check_within(re11, 0.0);
    check_within(left, 1.0 / n);
  }

  TEST_CASE("random colorings and projections") {
    Rng rng = make_rng(3);
    for (int n = 2; n <= 9; ++n) {
      const QuantumColoring chi = random_quantum_coloring(n, rng);
      CHECK(chi.plus_count() == n / 2);
      CHECK(chi.matrix().trace().real() == doctest::Approx(n % 2 == 0 ? 0.0 : -1.0));
      CHECK((chi.matrix() * chi.matrix() - Matrix::Identity(n, n)).norm() <= 1e-10);
      const OrthogonalProjection p = random_projection(n, rng);
      CHECK(p.rank() == n / 2);
      CHECK((p.matrix() * p.matrix() - p.matrix()).norm() <= 1e-10);
    }
    CHECK_THROWS_AS(random_quantum_coloring(1, rng), Error);
    const auto sys = random_projection_system(5, 4, 77);
    const auto again = random_projection_system(5, 4, 77);
    CHECK(sys.size() == 4);
    for (std::size_t j = 0; j < 4; ++j) CHECK((sys[j].matrix() - again[j].matrix()).norm() == 0.0);

    Stat diag;
    for (int t = 0; t < 5000; ++t) diag.add(random_projection(5, rng).matrix()(0, 0).real());
    check_within(diag, 2.0 / 5.0);
  }

  TEST_CASE("exact trace means") {
    CHECK(exact_mean_trace(4, 2) == 0.0);
    CHECK(exact_mean_trace(3, 2) == doctest::Approx(-2.0 / 3.0));
    CHECK(exact_mean_trace(5, 0) == 0.0);
    CHECK(exact_mean_trace_sq(2, 1) == doctest::Approx(1.0 / 3.0));
    CHECK(exact_mean_trace_sq(3, 3) == doctest::Approx(3.0));
    CHECK(exact_mean_trace_sq(4, 4) == doctest::Approx(4.0));
  }

  TEST_CASE("fixed coloring formula") {
    CHECK(exact_mean_trace_sq_fixed_coloring(2, 0) == doctest::Approx(1.0 / 3.0));
    CHECK(exact_mean_trace_sq_fixed_coloring(2, 2) == doctest::Approx(1.0));
    CHECK_THROWS_AS(exact_mean_trace_sq_fixed_coloring(4, 1), Error);
    // chi = -I: tr((chi P)^2) = rank always
    CHECK(exact_mean_trace_sq_fixed_coloring(5, -5) == doctest::Approx(2.0));
  }

  TEST_CASE("expected commutator term stays in range") {
    for (int n = 2; n <= 12; ++n) {
      for (int r = 0; r <= n; ++r) {
        const double e = r - exact_mean_trace_sq(n, r);
        const double nn = n;
        CHECK(e >= -1e-12);
        CHECK(e <= nn * nn / (nn * nn - 1) * r - nn / (nn * nn - 1) * r * r + 1e-9);
      }
    }
  }

  TEST_CASE("fourth moments") {
    const HaarFourthMoments f = haar_fourth_moments(2);
    CHECK(f.abs4 == doctest::Approx(1.0 / 3.0));
    CHECK(f.abs2_shared_line == doctest::Approx(1.0 / 6.0));
    CHECK(f.abs2_disjoint == doctest::Approx(1.0 / 3.0));
    CHECK(f.cross == doctest::Approx(-1.0 / 6.0));
    for (int n = 2; n <= 10; ++n) {
      const HaarFourthMoments g = haar_fourth_moments(n);
      CHECK(n * g.abs4 + n * (n - 1) * g.abs2_shared_line == doctest::Approx(1.0));
    }
    CHECK_THROWS_AS(haar_fourth_moments(1), Error);
  }

  TEST_CASE("moments by Monte Carlo at small scale") {
    const int n = 4;
    Rng rng = make_rng(4);
    const HaarFourthMoments f = haar_fourth_moments(n);
    Stat abs4, shared, disjoint, cross, tr2, tr_sq2, fixed;
    for (int t = 0; t < 20000; ++t) {
      const Matrix u = haar_unitary(n, rng);
      abs4.add(std::pow(std::norm(u(1, 2)), 2));
      shared.add(std::norm(u(1, 2)) * std::norm(u(1, 3)));
      disjoint.add(std::norm(u(1, 2)) * std::norm(u(3, 0)));
      cross.add((u(1, 2) * u(3, 0) * std::conj(u(3, 2)) * std::conj(u(1, 0))).real());
      const QuantumColoring chi = QuantumColoring::from_unitary(u, n / 2);
      tr2.add(chi.matrix().topLeftCorner(2, 2).trace().real());
      tr_sq2.add(chi.matrix().topLeftCorner(2, 2).squaredNorm());
      const int signs[] = {1, 1, 1, -1};
      const Matrix p = u.leftCols(2) * u.leftCols(2).adjoint();
      const Matrix a = QuantumColoring::diagonal(signs).matrix() * p;
      fixed.add((a * a).trace().real());
    }
    check_within(abs4, f.abs4);
    check_within(shared, f.abs2_shared_line);
    check_within(disjoint, f.abs2_disjoint);
    check_within(cross, f.cross);
    check_within(tr2, exact_mean_trace(n, 2));
    check_within(tr_sq2, exact_mean_trace_sq(n, 2));
    check_within(fixed, exact_mean_trace_sq_fixed_coloring(n, 2));
  }

  TEST_CASE("concentration probe") {
    const std::vector<double> deltas = {0.05, 0.1, 0.2, 0.4, 1.5};
    const ConcentrationProbe probe = concentration_probe(8, 2000, deltas, 5);
    REQUIRE(probe.rows.size() == deltas.size());
    CHECK(probe.rank == 4);
    for (std::size_t i = 1; i < probe.rows.size(); ++i) {
      CHECK(probe.rows[i].tail_trace <= probe.rows[i - 1].tail_trace);
      CHECK(probe.rows[i].tail_commutator <= probe.rows[i - 1].tail_commutator);
    }
    CHECK(probe.rows.back().tail_trace == 0.0);
    CHECK(probe.c_hat() > 0.0);
    CHECK(probe.exact_mean_trace == 0.0);
    CHECK(std::abs(probe.empirical_mean_trace) < 0.2);
    CHECK_THROWS_AS(concentration_probe(8, 999, deltas, 5), Error);

    const auto grid = default_delta_grid();
    CHECK(grid.size() == 20);
    CHECK(grid.front() == doctest::Approx(0.025));
    CHECK(grid.back() == doctest::Approx(0.5));
  }
}
