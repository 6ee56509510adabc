#include "qdlab/randmat.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "qdlab/error.hpp"
#include "qdlab/parallel.hpp"

namespace qdlab {

Matrix haar_unitary(int n, Rng& rng) {
  if (n < 1) throw Error(ErrorCode::DegenerateDim, "N must be >= 1");
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix z(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      z(i, j) = Complex(re, im);
    }
  }
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ();
  const Matrix& r = qr.matrixQR();
  for (int j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    const double a = std::abs(d);
    q.col(j) *= a > 0.0 ? d / a : Complex(1.0, 0.0);
  }
  return q;
}

Matrix haar_unitary(int n, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  return haar_unitary(n, rng);
}

QuantumColoring random_quantum_coloring(int n, Rng& rng) {
  if (n < 2) throw Error(ErrorCode::DegenerateDim, "random quantum colorings need N >= 2");
  return QuantumColoring::from_unitary(haar_unitary(n, rng), n / 2);
}

QuantumColoring random_quantum_coloring(int n, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  return random_quantum_coloring(n, rng);
}

OrthogonalProjection random_projection(int n, Rng& rng) {
  if (n < 2) throw Error(ErrorCode::DegenerateDim, "random projections need N >= 2");
  return OrthogonalProjection::from_basis(haar_unitary(n, rng).leftCols(n / 2));
}

OrthogonalProjection random_projection(int n, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  return random_projection(n, rng);
}

ProjectionSystem random_projection_system(int n, int m, std::uint64_t seed) {
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "M must be >= 1");
  std::vector<OrthogonalProjection> ps;
  ps.reserve(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    Rng rng = make_rng(seed, static_cast<std::uint64_t>(j));
    ps.push_back(random_projection(n, rng));
  }
  return ProjectionSystem(std::move(ps));
}

namespace {

void check_moment_args(int n, int r) {
  if (n < 2) throw Error(ErrorCode::DegenerateDim, "moment formulas need N >= 2");
  if (r < 0 || r > n) throw Error(ErrorCode::InvalidArgument, "rank outside [0, N]");
}

}  // namespace

double exact_mean_trace(int n, int r) {
  check_moment_args(n, r);
  const int trace_d = (n % 2 == 0) ? 0 : -1;
  return static_cast<double>(trace_d) * r / n;
}

double exact_mean_trace_sq(int n, int r) {
  check_moment_args(n, r);
  const double nn = n;
  const double rr = r;
  if (n % 2 == 0) return (nn * rr * rr - rr) / (nn * nn - 1.0);
  return rr * rr / nn;
}

double exact_mean_trace_sq_fixed_coloring(int n, int trace_chi) {
  check_moment_args(n, 0);
  if (std::abs(trace_chi) > n || (trace_chi + n) % 2 != 0) {
    throw Error(ErrorCode::InvalidArgument, "trace of a coloring must be 2k - N");
  }
  const double nn = n;
  const double h = n / 2;
  const double t = trace_chi;
  return t * t * h * (nn - h) / (nn * (nn * nn - 1.0)) + h * (nn * h - 1.0) / (nn * nn - 1.0);
}

HaarFourthMoments haar_fourth_moments(int n) {
  if (n < 2) throw Error(ErrorCode::DegenerateDim, "fourth moments need N >= 2");
  const double nn = n;
  return {2.0 / (nn * (nn + 1.0)), 1.0 / (nn * (nn + 1.0)), 1.0 / (nn * nn - 1.0),
          -1.0 / (nn * (nn * nn - 1.0))};
}

double ConcentrationProbe::c_hat() const {
  return std::min(trace_fit.c_valid, commutator_fit.c_valid);
}

std::vector<double> default_delta_grid() {
  std::vector<double> grid;
  for (int i = 1; i <= 20; ++i) grid.push_back(0.025 * i);
  return grid;
}

namespace {

ConcentrationFit fit_tail(int n, std::span<const double> deltas, const std::vector<double>& tails) {
  ConcentrationFit fit{std::numeric_limits<double>::infinity(), 0.0, 0};
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (tails[i] <= 0.0) continue;
    const double x = static_cast<double>(n) * n * deltas[i] * deltas[i];
    const double y = -std::log(tails[i] / 2.0);
    fit.c_valid = std::min(fit.c_valid, y / x);
    sxy += x * y;
    sxx += x * x;
    ++fit.points_used;
  }
  fit.c_least_squares = sxx > 0.0 ? sxy / sxx : 0.0;
  return fit;
}

}  // namespace

ConcentrationProbe concentration_probe(int n, int trials, std::span<const double> deltas,
                                       std::uint64_t seed, int threads) {
  if (trials < 1000) throw Error(ErrorCode::InvalidArgument, "concentration probe needs trials >= 1000");
  if (n < 2) throw Error(ErrorCode::DegenerateDim, "N must be >= 2");
  for (double d : deltas) {
    if (!(d > 0.0)) throw Error(ErrorCode::InvalidArgument, "deviations must be positive");
  }

  Rng projection_rng = make_rng(seed, 0);
  const OrthogonalProjection p = random_projection(n, projection_rng);
  const int r = p.rank();

  std::vector<double> f1(static_cast<std::size_t>(trials));
  std::vector<double> f2(static_cast<std::size_t>(trials));
  parallel_for(static_cast<std::size_t>(trials), threads, [&](std::size_t t) {
    Rng rng = make_rng(seed, 1 + t);
    const TraceTerms terms = trace_terms(random_quantum_coloring(n, rng), p);
    f1[t] = terms.trace;
    f2[t] = r - terms.trace_sq;
  });

  ConcentrationProbe probe;
  probe.n = n;
  probe.rank = r;
  probe.trials = trials;
  probe.exact_mean_trace = exact_mean_trace(n, r);
  probe.exact_mean_commutator = r - exact_mean_trace_sq(n, r);
  probe.empirical_mean_trace = std::accumulate(f1.begin(), f1.end(), 0.0) / trials;
  probe.empirical_mean_commutator = std::accumulate(f2.begin(), f2.end(), 0.0) / trials;

  std::vector<double> tails1, tails2;
  for (double delta : deltas) {
    const double threshold = delta * n;
    int c1 = 0, c2 = 0;
    for (int t = 0; t < trials; ++t) {
      c1 += std::abs(f1[static_cast<std::size_t>(t)] - probe.exact_mean_trace) >= threshold ? 1 : 0;
      c2 += std::abs(f2[static_cast<std::size_t>(t)] - probe.exact_mean_commutator) >= threshold ? 1 : 0;
    }
    tails1.push_back(static_cast<double>(c1) / trials);
    tails2.push_back(static_cast<double>(c2) / trials);
    probe.rows.push_back({delta, tails1.back(), tails2.back()});
  }
  probe.trace_fit = fit_tail(n, deltas, tails1);
  probe.commutator_fit = fit_tail(n, deltas, tails2);
  return probe;
}

}  // namespace qdlab
