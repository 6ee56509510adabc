#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "qdlab/concentration.hpp"
#include "qdlab/error.hpp"

using namespace qdlab;

TEST_SUITE("concentration") {
  TEST_CASE("Bernstein bound arithmetic") {
    const double v[] = {0.25};
    CHECK(bernstein_tail(v, 1.0, 1.0) == doctest::Approx(2.0 * std::exp(-0.5)));
    CHECK(bernstein_tail(v, 1.0, 1.0) == doctest::Approx(1.2131).epsilon(1e-4));
    double prev = 10.0;
    for (double t = 0.1; t < 60.0; t *= 1.5) {
      const double b = bernstein_tail(v, 1.0, t);
      CHECK(b < prev);
      prev = b;
    }
    CHECK(prev < 1e-6);
    const double none[] = {0.0, 0.0};
    CHECK(bernstein_tail(none, 2.0, 4.0) == doctest::Approx(2.0 * std::exp(-1.0)));
    try {
      bernstein_tail(v, 1.0, 0.0);
      FAIL("expected NonPositiveT");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NonPositiveT);
    }
  }

  TEST_CASE("Bernstein bound dominates exact Poisson-binomial tails") {
    Rng rng = make_rng(21);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int violations = 0;
    for (int k = 0; k < 50; ++k) {
      const int n = 2 + k % 30;
      std::vector<double> p(static_cast<std::size_t>(n));
      std::vector<double> var;
      double mean = 0.0;
      for (double& x : p) {
        x = u(rng);
        mean += x;
        var.push_back(x * (1.0 - x));
      }
      const auto pmf = poisson_binomial_pmf(p);
      for (int g = 1; g <= 20; ++g) {
        const double t = n * g / 20.0;
        double tail = 0.0;
        for (std::size_t j = 0; j < pmf.size(); ++j) {
          if (std::abs(static_cast<double>(j) - mean) >= t) tail += pmf[j];
        }
        if (tail > bernstein_tail(var, 1.0, t) + 1e-12) ++violations;
      }
    }
    CHECK(violations == 0);
  }

  TEST_CASE("comparison factors") {
    CHECK(comparison_factor(1, 1.0, ComparisonVariant::Log) == doctest::Approx(2.0 * std::log(2.0) + 1.0));
    CHECK(comparison_factor(1, 1.0, ComparisonVariant::Log) == doctest::Approx(2.3863).epsilon(1e-4));
    CHECK(comparison_factor(50, 1e-12, ComparisonVariant::SqrtLog) == doctest::Approx(1.0));
    for (std::size_t m : {2u, 5u, 100u}) {
      CHECK(comparison_factor(m, 0.7, ComparisonVariant::SqrtLog) <= comparison_factor(m, 0.7, ComparisonVariant::Log));
    }
    const auto grid = default_c_grid();
    CHECK(grid.size() == 25);
    CHECK(grid.front() == doctest::Approx(0.01));
    CHECK(grid.back() == doctest::Approx(100.0));
    CHECK(grid[12] == doctest::Approx(1.0));
  }

  TEST_CASE("comparison check") {
    QdiscOptions opts;
    opts.seed = 8;
    opts.restarts = 2;
    opts.sweeps = 1;
    const auto grid = default_c_grid();
    const ComparisonReport ap = comparison_check(arithmetic_progressions(8), grid, opts);
    CHECK(ap.disc == 2);
    CHECK(ap.sandwich_holds);
    CHECK(ap.qdisc_estimate <= ap.disc + 1e-9);
    REQUIRE(ap.min_c_log.has_value());
    CHECK(ap.disc <= comparison_factor(ap.m, *ap.min_c_log, ComparisonVariant::Log) * ap.qdisc_estimate + 1e-9);

    const ComparisonReport singles = comparison_check(SetSystem(4, {{1}, {2}, {3}, {4}}), grid, opts);
    CHECK(singles.disc == 1);
    CHECK(singles.qdisc_estimate == doctest::Approx(1.0));
    CHECK(singles.min_c_log == grid.front());
    CHECK_THROWS_AS(comparison_check(arithmetic_progressions(9), grid, opts, 8), Error);
  }

  TEST_CASE("lower bound constants") {
    const LowerBoundConstants one = lower_bound_constants(1.0);
    CHECK(one.epsilon == 0.05);
    CHECK(one.zeta == doctest::Approx(1.0 / (2.0 * std::sqrt(20.0))));
    CHECK(one.zeta == doctest::Approx(0.1118).epsilon(1e-3));
    CHECK(one.condition_margin > 0.0);
    double prev = 1.0;
    for (double a : {0.1, 0.5, 1.0, 3.0, 10.0}) {
      const LowerBoundConstants c = lower_bound_constants(a);
      CHECK(c.epsilon == 0.05);
      CHECK(c.zeta < prev);
      CHECK(c.condition_margin > 0.0);
      prev = c.zeta;
    }
    CHECK_THROWS_AS(lower_bound_constants(0.0), Error);
  }
}
