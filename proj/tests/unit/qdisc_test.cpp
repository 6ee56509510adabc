#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "qdlab/combdisc.hpp"
#include "qdlab/error.hpp"
#include "qdlab/qdisc.hpp"

using namespace qdlab;
using namespace testing_support;

TEST_SUITE("qdisc") {
  TEST_CASE("objective hand values") {
    Rng rng = make_rng(1);
    const OrthogonalProjection p = random_rank_projection(5, 3, rng);
    const int plus[] = {1, 1, 1, 1, 1};
    const ObjectiveValue id = objective(QuantumColoring::diagonal(plus), p);
    CHECK(id.trace_term == doctest::Approx(9.0));
    CHECK(std::abs(id.commutator_term) <= 1e-12);
    CHECK(id.value == doctest::Approx(3.0));

    Matrix x(2, 2);
    x << 0, 1, 1, 0;
    const bool first[] = {true, false};
    const ObjectiveValue v =
        objective(QuantumColoring::from_matrix(make_hermitian(x)), OrthogonalProjection::diagonal(first));
    CHECK(std::abs(v.trace_term) <= 1e-15);
    CHECK(v.commutator_term == doctest::Approx(1.0));
    CHECK(v.value == doctest::Approx(1.0));
  }

  TEST_CASE("diagonal colorings reproduce signed sums") {
    Rng rng = make_rng(2);
    for (int t = 0; t < 50; ++t) {
      const int n = 2 + t % 9;
      const SetSystem s = random_set_system(n, 6, rng());
      std::vector<int> signs;
      for (int i = 0; i < n; ++i) signs.push_back((rng() >> 63) ? 1 : -1);
      const QuantumColoring chi = QuantumColoring::diagonal(signs);
      const auto sums = evaluate_coloring(s, Coloring(signs));
      const ProjectionSystem ps = to_projection_system(s);
      int worst = 0;
      for (std::size_t j = 0; j < s.size(); ++j) {
        CHECK(objective(chi, ps[j]).value == static_cast<double>(std::abs(sums[j])));
        worst = std::max(worst, std::abs(sums[j]));
      }
      CHECK(max_objective(ps, chi) == static_cast<double>(worst));
    }
  }

  TEST_CASE("rank-one constancy and unitary covariance") {
    Rng rng = make_rng(3);
    for (int t = 0; t < 200; ++t) {
      const int n = 2 + t % 15;
      const QuantumColoring chi = random_coloring(n, static_cast<int>(rng() % (n + 1)), rng);
      const OrthogonalProjection p = random_rank_projection(n, 1, rng);
      CHECK(std::abs(objective(chi, p).value - 1.0) <= 1e-9);

      const OrthogonalProjection q = random_rank_projection(n, static_cast<int>(rng() % (n + 1)), rng);
      const Matrix u = haar_unitary(n, rng);
      const QuantumColoring chi2 = QuantumColoring::from_matrix(make_hermitian(u * chi.matrix() * u.adjoint()));
      const OrthogonalProjection q2 = OrthogonalProjection::from_matrix(make_hermitian(u * q.matrix() * u.adjoint()));
      CHECK(std::abs(objective(chi, q).value - objective(chi2, q2).value) <= 1e-9);
      const ObjectiveValue ov = objective(chi, q);
      CHECK(ov.commutator_term >= -1e-9);
      CHECK(ov.commutator_term <= q.rank() + 1e-9);
    }
  }

  TEST_CASE("objective agrees with the determinantal expectation") {
    Rng rng = make_rng(4);
    for (int t = 0; t < 60; ++t) {
      const int n = 1 + t % 8;
      const QuantumColoring chi = random_coloring(n, static_cast<int>(rng() % (n + 1)), rng);
      const Subset s = random_subset(n, rng);
      CHECK(objective_vs_dpp(chi, s).difference <= 1e-9);
    }
    const int signs[] = {1, -1, 1, 1};
    const DppConsistency d = objective_vs_dpp(QuantumColoring::diagonal(signs), {1, 2, 3});
    CHECK(d.expected_imbalance == doctest::Approx(1.0));
    CHECK(d.objective_squared == doctest::Approx(1.0));
    const DppConsistency e = objective_vs_dpp(QuantumColoring::diagonal(signs), {});
    CHECK(std::abs(e.expected_imbalance) <= 1e-12);
    CHECK(std::abs(e.objective_squared) <= 1e-12);
  }

  TEST_CASE("trivial bound identity") {
    Rng rng = make_rng(5);
    for (int t = 0; t < 200; ++t) {
      const int n = 1 + t % 9;
      const QuantumColoring chi = random_coloring(n, static_cast<int>(rng() % (n + 1)), rng);
      const OrthogonalProjection p = random_rank_projection(n, static_cast<int>(rng() % (n + 1)), rng);
      const TrivialBoundRecord rec = trivial_bound_check(chi, p);
      CHECK(rec.residual <= 1e-9);
      CHECK(rec.within_bound);
      CHECK(rec.objective_value <= n + 1e-9);
    }
    const QuantumColoring chi = random_coloring(4, 2, rng);
    const TrivialBoundRecord zero = trivial_bound_check(chi, random_rank_projection(4, 0, rng));
    CHECK(std::abs(zero.lhs) <= 1e-12);
    CHECK(std::abs(zero.rhs) <= 1e-12);
  }

  TEST_CASE("system evaluator matches direct evaluation") {
    Rng rng = make_rng(6);
    const ProjectionSystem sys = random_projection_system(7, 9, 61);
    const SystemEvaluator eval(sys);
    CHECK(eval.size() == 9);
    for (int k = 0; k <= 7; ++k) {
      const QuantumColoring chi = random_coloring(7, k, rng);
      const auto sq = eval.squared_objectives(chi);
      for (std::size_t j = 0; j < sys.size(); ++j) {
        const ObjectiveValue ov = objective(chi, sys[j]);
        CHECK(std::abs(sq[j] - ov.value * ov.value) <= 1e-9);
      }
    }
  }

  TEST_CASE("estimator hand cases") {
    QdiscOptions opts;
    opts.seed = 3;
    opts.restarts = 2;
    opts.sweeps = 1;
    const SetSystem singles(5, {{1}, {2}, {3}, {4}, {5}});
    CHECK(qdisc_estimate(to_projection_system(singles), opts).value == doctest::Approx(1.0).epsilon(1e-9));

    for (int n : {2, 4, 6}) {
      const ProjectionSystem id({OrthogonalProjection::from_basis(Matrix::Identity(n, n))});
      const QdiscEstimate e = qdisc_estimate(id, opts);
      CHECK(e.value * e.value <= 1e-12);
      CHECK(e.plus_count == n / 2);
    }
  }

  TEST_CASE("estimator sandwich, bounds and determinism") {
    Rng rng = make_rng(7);
    for (int t = 0; t < 12; ++t) {
      const SetSystem s = random_set_system(3 + t % 5, 5, rng());
      const DiscResult d = disc_exact(s);
      QdiscOptions opts;
      opts.seed = rng();
      opts.restarts = 2;
      opts.sweeps = 1;
      opts.warm_starts.push_back(QuantumColoring::diagonal(d.witness.signs()));
      const ProjectionSystem ps = to_projection_system(s);
      const QdiscEstimate e = qdisc_estimate(ps, opts);
      CHECK(e.value <= d.value + 1e-9);
      CHECK(e.value <= s.ground_size() + 1e-9);
      CHECK(std::abs(e.value - max_objective(ps, e.witness)) <= 1e-12);
      const QdiscEstimate again = qdisc_estimate(ps, opts);
      CHECK(again.value == e.value);
      CHECK((again.witness.matrix() - e.witness.matrix()).norm() == 0.0);
    }
  }

  TEST_CASE("estimate does not increase with more restarts") {
    const ProjectionSystem ps = random_projection_system(5, 6, 90);
    QdiscOptions opts;
    opts.seed = 11;
    opts.sweeps = 1;
    double previous = std::numeric_limits<double>::infinity();
    for (int r = 1; r <= 3; ++r) {
      opts.restarts = r;
      const double v = qdisc_estimate(ps, opts).value;
      CHECK(v <= previous + 1e-12);
      previous = v;
    }
  }

  TEST_CASE("rotation sweeps improve on the raw starts") {
    const ProjectionSystem ps = random_projection_system(6, 8, 91);
    QdiscOptions raw;
    raw.seed = 4;
    raw.sweeps = 0;
    QdiscOptions refined = raw;
    refined.sweeps = 2;
    CHECK(qdisc_estimate(ps, refined).value <= qdisc_estimate(ps, raw).value);
  }

  TEST_CASE("threshold formula") {
    const double expected = std::sqrt(2.0) * (std::sqrt(std::log(8.0) + 4.0 / 3.0 - 2.0 / 3.0) + 0.5);
    CHECK(delta_p(2, 1, 1, 1.0) == doctest::Approx(expected));
    CHECK(delta_p(2, 1, 1, 1.0) == doctest::Approx(3.0507).epsilon(1e-4));
    CHECK(delta_p(6, 0, 10, 0.5) == doctest::Approx(std::sqrt(2.0) * std::sqrt(2.0 * std::log(80.0))));
    double prev = 0.0;
    for (std::size_t m : {1u, 2u, 8u, 100u, 5000u}) {
      const double v = delta_p(7, 7, m, 1.0);
      CHECK(v > prev);
      prev = v;
    }
    CHECK_THROWS_AS(delta_p(1, 1, 1, 1.0), Error);
  }

  TEST_CASE("delta event record") {
    Rng rng = make_rng(8);
    const ProjectionSystem single({random_rank_projection(2, 1, rng)});
    for (int t = 0; t < 20; ++t) {
      const auto rec = check_delta_event(single, random_coloring(2, t % 3, rng), 1.0);
      CHECK(rec.all_satisfied);
      CHECK(rec.objective_values.size() == 1);
    }
    const ProjectionSystem sys = random_projection_system(6, 5, 13);
    const QuantumColoring chi = random_coloring(6, 3, rng);
    const auto a = check_delta_event(sys, chi, 0.7);
    const auto b = check_delta_event(sys, chi, 0.7);
    CHECK(a.satisfied.size() == 5);
    CHECK(a.objective_values == b.objective_values);
    CHECK(a.satisfied == b.satisfied);
  }

  TEST_CASE("Lipschitz estimates") {
    Rng rng = make_rng(9);
    for (int n : {4, 8, 16}) {
      for (int t = 0; t < 40; ++t) {
        const OrthogonalProjection p = random_rank_projection(n, n / 2, rng);
        const QuantumColoring c1 = random_coloring(n, static_cast<int>(rng() % (n + 1)), rng);
        const QuantumColoring c2 = random_coloring(n, static_cast<int>(rng() % (n + 1)), rng);
        CHECK(lipschitz_check(p, c1, c2).holds());
        const LipschitzRecord same = lipschitz_check(p, c1, c1);
        CHECK(same.trace_gap == 0.0);
        CHECK(same.trace_bound == 0.0);
        const QuantumColoring neg = QuantumColoring::from_matrix(make_hermitian(-c1.matrix()));
        const LipschitzRecord flip = lipschitz_check(p, c1, neg);
        CHECK(flip.trace_gap <= 1e-9);
        CHECK(flip.trace_bound > 0.0);
      }
    }
    CHECK_THROWS_AS(lipschitz_check(random_rank_projection(4, 1, rng), random_coloring(4, 2, rng),
                                    random_coloring(4, 2, rng)),
                    Error);
  }
}
