#include "qdlab/qdisc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>

#include "qdlab/dpp.hpp"
#include "qdlab/error.hpp"
#include "qdlab/parallel.hpp"
#include "qdlab/randmat.hpp"

namespace qdlab {

ObjectiveValue objective(const QuantumColoring& chi, const OrthogonalProjection& p) {
  if (chi.dim() != p.dim()) throw Error(ErrorCode::DimMismatch, "coloring and projection sizes differ");
  const Matrix& x = chi.matrix();
  const Matrix& pm = p.matrix();
  const Matrix a = x * pm;
  const double tr_a = a.trace().real();
  const double tr_a2 = (a * a).trace().real();
  const double tr_p = pm.trace().real();

  ObjectiveValue out;
  out.trace_term = tr_a * tr_a;
  out.commutator_term = tr_p - tr_a2;
  out.value = std::sqrt(std::max(0.0, out.trace_term + out.commutator_term));

  const double commutator_form = (x * commutator(chi.hermitian(), p.hermitian()) * pm).trace().real();
  if (std::abs(commutator_form - out.commutator_term) > 1e-9 * std::max(1.0, tr_p)) {
    std::ostringstream os;
    os << "tr(chi[chi,P]P) = " << commutator_form << " but tr(P - (chi P)^2) = " << out.commutator_term;
    throw Error(ErrorCode::ConditionViolated, os.str());
  }
  return out;
}

double max_objective(const ProjectionSystem& system, const QuantumColoring& chi) {
  double best = 0.0;
  for (const auto& p : system.projections()) best = std::max(best, objective(chi, p).value);
  return best;
}

DppConsistency objective_vs_dpp(const QuantumColoring& chi, const Subset& s) {
  const int n = chi.dim();
  const Matrix q = 0.5 * (chi.matrix() + Matrix::Identity(n, n));
  std::optional<DPPKernel> kernel;
  try {
    kernel.emplace(validate_kernel(make_hermitian(q)));
  } catch (const Error& e) {
    throw Error(ErrorCode::KernelInvalid, e.what());
  }
  const double expected = expected_squared_imbalance(*kernel, s);

  auto flags = std::make_unique<bool[]>(static_cast<std::size_t>(n));
  std::fill(flags.get(), flags.get() + n, false);
  for (int i : s) flags[static_cast<std::size_t>(i - 1)] = true;
  const auto ps = OrthogonalProjection::diagonal(std::span<const bool>(flags.get(), static_cast<std::size_t>(n)));
  const ObjectiveValue ov = objective(chi, ps);
  const double sq = ov.trace_term + ov.commutator_term;
  return {expected, sq, std::abs(expected - sq)};
}

TrivialBoundRecord trivial_bound_check(const QuantumColoring& chi, const OrthogonalProjection& p) {
  if (chi.dim() != p.dim()) throw Error(ErrorCode::DimMismatch, "coloring and projection sizes differ");
  const int n = chi.dim();
  const Matrix a = chi.matrix() * p.matrix();
  const double tr_a = a.trace().real();
  const double lhs = tr_a * tr_a - (a * a).trace().real();

  const SpectralDecomposition sd = spectral_decompose(chi.hermitian());
  const Matrix pr = sd.eigenvectors.adjoint() * p.matrix() * sd.eigenvectors;
  double rhs = 0.0;
  for (int i = 0; i < n; ++i) {
    const double ci = sd.eigenvalues(i) > 0.0 ? 1.0 : -1.0;
    for (int j = i + 1; j < n; ++j) {
      const double cj = sd.eigenvalues(j) > 0.0 ? 1.0 : -1.0;
      rhs += ci * cj * (pr(i, i).real() * pr(j, j).real() - std::norm(pr(i, j)));
    }
  }
  rhs *= 2.0;

  const ObjectiveValue ov = objective(chi, p);
  const double nn = n;
  return {lhs, rhs, std::abs(lhs - rhs), ov.value, ov.value * ov.value <= nn * nn + 1e-9};
}

SystemEvaluator::SystemEvaluator(const ProjectionSystem& system) {
  Eigen::Index total = 0;
  for (const auto& p : system.projections()) {
    offsets_.push_back(total);
    ranks_.push_back(p.rank());
    total += p.rank();
  }
  stacked_.resize(total, system.dim());
  for (std::size_t j = 0; j < system.size(); ++j) {
    if (ranks_[j] > 0) stacked_.middleRows(offsets_[j], ranks_[j]) = system[j].range_basis().adjoint();
  }
}

std::vector<double> SystemEvaluator::squared_objectives(const QuantumColoring& chi) const {
  if (chi.dim() != stacked_.cols()) throw Error(ErrorCode::DimMismatch, "coloring size differs from system");
  std::vector<double> out(ranks_.size());
  const Matrix c_all = stacked_ * chi.plus_basis();
  for (std::size_t j = 0; j < ranks_.size(); ++j) {
    const double r = ranks_[j];
    if (ranks_[j] == 0) {
      out[j] = 0.0;
      continue;
    }
    const auto c = c_all.middleRows(offsets_[j], ranks_[j]);
    const double c2 = c.squaredNorm();
    const double g2 = c.cols() <= c.rows() ? (c.adjoint() * c).squaredNorm() : (c * c.adjoint()).squaredNorm();
    const double t = 2.0 * c2 - r;
    out[j] = t * t + 4.0 * c2 - 4.0 * g2;
  }
  return out;
}

namespace {

// Plane rotation G on coordinates (p, q): G_pp = G_qq = c, G_pq = -sigma,
// G_qp = conj(sigma).
struct Rotation {
  double c;
  Complex sigma;
};

Rotation make_rotation(double theta, double phase) {
  return {std::cos(theta), std::sin(theta) * std::polar(1.0, phase)};
}

// State of one start: chi = U D U*, with W_j = U* P_j U for each projection,
// so that tr(chi P_j) = sum d_i W_ii and tr((chi P_j)^2) = sum d_i d_j |W_ij|^2.
class RotationSearch {
 public:
  RotationSearch(const ProjectionSystem& system, Matrix u, int k)
      : u_(std::move(u)), k_(k), n_(static_cast<int>(u_.rows())), d_(n_) {
    for (int i = 0; i < n_; ++i) d_[static_cast<std::size_t>(i)] = i < k_ ? 1.0 : -1.0;
    for (const auto& p : system.projections()) {
      ranks_.push_back(p.rank());
      if (p.rank() == 0) {
        w_.push_back(Matrix::Zero(n_, n_));
      } else {
        const Matrix g = p.range_basis().adjoint() * u_;
        w_.push_back(g.adjoint() * g);
      }
    }
    t1_.resize(w_.size());
    t2_.resize(w_.size());
    for (std::size_t j = 0; j < w_.size(); ++j) recompute(j);
  }

  const Matrix& unitary() const { return u_; }

  double max_squared() const {
    double best = 0.0;
    for (std::size_t j = 0; j < w_.size(); ++j) best = std::max(best, squared(j, t1_[j], t2_[j]));
    return best;
  }

  // Returns true when some plane rotation improved the max objective.
  bool sweep() {
    bool improved = false;
    double current = max_squared();
    for (int p = 0; p < k_; ++p) {
      for (int q = k_; q < n_; ++q) {
        double best_value = current;
        std::optional<Rotation> best_rot;
        for (double phase : {0.0, std::numbers::pi / 2.0}) {
          double theta_best = 0.0;
          double value_best = current;
          const double step = std::numbers::pi / 64.0;
          for (int g = 0; g < 64; ++g) {
            const double theta = -std::numbers::pi / 2.0 + g * step;
            if (g == 32) continue;  // theta = 0 is the current state
            const double v = evaluate(p, q, make_rotation(theta, phase));
            if (v < value_best) {
              value_best = v;
              theta_best = theta;
            }
          }
          double h = step;
          for (int halving = 0; halving < 3; ++halving) {
            h *= 0.5;
            for (double cand : {theta_best - h, theta_best + h}) {
              const double v = evaluate(p, q, make_rotation(cand, phase));
              if (v < value_best) {
                value_best = v;
                theta_best = cand;
              }
            }
          }
          if (value_best < best_value) {
            best_value = value_best;
            best_rot = make_rotation(theta_best, phase);
          }
        }
        if (best_rot && best_value < current - 1e-13 * std::max(1.0, current)) {
          apply(p, q, *best_rot);
          current = max_squared();
          improved = true;
        }
      }
    }
    return improved;
  }

 private:
  static double squared_value(double r, double t1, double t2) { return t1 * t1 + r - t2; }
  double squared(std::size_t j, double t1, double t2) const { return squared_value(ranks_[j], t1, t2); }

  void recompute(std::size_t j) {
    const Matrix& w = w_[j];
    double t1 = 0.0, t2 = 0.0;
    for (int a = 0; a < n_; ++a) {
      t1 += d_[static_cast<std::size_t>(a)] * w(a, a).real();
      for (int b = 0; b < n_; ++b) {
        t2 += d_[static_cast<std::size_t>(a)] * d_[static_cast<std::size_t>(b)] * std::norm(w(a, b));
      }
    }
    t1_[j] = t1;
    t2_[j] = t2;
  }

  // 2x2 block B' = g* B g.
  static Eigen::Matrix2cd rotate_block(const Eigen::Matrix2cd& b, const Rotation& r) {
    Eigen::Matrix2cd g;
    g << r.c, -r.sigma, std::conj(r.sigma), r.c;
    return g.adjoint() * b * g;
  }

  double evaluate(int p, int q, const Rotation& r) const {
    const double dp = d_[static_cast<std::size_t>(p)];
    const double dq = d_[static_cast<std::size_t>(q)];
    const Complex sc = std::conj(r.sigma);
    double worst = 0.0;
    for (std::size_t j = 0; j < w_.size(); ++j) {
      const Matrix& w = w_[j];
      Eigen::Matrix2cd b;
      b << w(p, p), w(p, q), w(q, p), w(q, q);
      const Eigen::Matrix2cd nb = rotate_block(b, r);

      double dt2 = 0.0;
      for (int i = 0; i < n_; ++i) {
        if (i == p || i == q) continue;
        const Complex wp = w(p, i);
        const Complex wq = w(q, i);
        const Complex np = r.c * wp + r.sigma * wq;
        const Complex nq = -sc * wp + r.c * wq;
        dt2 += 2.0 * d_[static_cast<std::size_t>(i)] *
               (dp * (std::norm(np) - std::norm(wp)) + dq * (std::norm(nq) - std::norm(wq)));
      }
      dt2 += dp * dp * (std::norm(nb(0, 0)) - std::norm(b(0, 0))) +
             dq * dq * (std::norm(nb(1, 1)) - std::norm(b(1, 1))) +
             2.0 * dp * dq * (std::norm(nb(0, 1)) - std::norm(b(0, 1)));
      const double dt1 = dp * (nb(0, 0).real() - b(0, 0).real()) + dq * (nb(1, 1).real() - b(1, 1).real());
      worst = std::max(worst, squared(j, t1_[j] + dt1, t2_[j] + dt2));
    }
    return worst;
  }

  void apply(int p, int q, const Rotation& r) {
    const Complex sc = std::conj(r.sigma);
    for (std::size_t j = 0; j < w_.size(); ++j) {
      Matrix& w = w_[j];
      Eigen::Matrix2cd b;
      b << w(p, p), w(p, q), w(q, p), w(q, q);
      const Eigen::Matrix2cd nb = rotate_block(b, r);
      for (int i = 0; i < n_; ++i) {
        if (i == p || i == q) continue;
        const Complex wp = w(p, i);
        const Complex wq = w(q, i);
        w(p, i) = r.c * wp + r.sigma * wq;
        w(q, i) = -sc * wp + r.c * wq;
        w(i, p) = std::conj(w(p, i));
        w(i, q) = std::conj(w(q, i));
      }
      w(p, p) = nb(0, 0);
      w(p, q) = nb(0, 1);
      w(q, p) = nb(1, 0);
      w(q, q) = nb(1, 1);
      recompute(j);
    }
    // U <- U G
    const Vector up = u_.col(p);
    const Vector uq = u_.col(q);
    u_.col(p) = r.c * up + sc * uq;
    u_.col(q) = -r.sigma * up + r.c * uq;
  }

  Matrix u_;
  int k_;
  int n_;
  std::vector<double> d_;
  std::vector<int> ranks_;
  std::vector<Matrix> w_;
  std::vector<double> t1_, t2_;
};

// Unitary whose leading `k` columns span the +1 eigenspace of chi.
Matrix unitary_of(const QuantumColoring& chi) {
  const SpectralDecomposition sd = spectral_decompose(chi.hermitian());
  const int n = chi.dim();
  const int k = chi.plus_count();
  Matrix u(n, n);
  u.leftCols(k) = sd.eigenvectors.rightCols(k);
  u.rightCols(n - k) = sd.eigenvectors.leftCols(n - k);
  return u;
}

struct Candidate {
  int k;
  Matrix u;
  bool warm;
  double value_sq = 0.0;
  bool converged = false;
};

}  // namespace

QdiscEstimate qdisc_estimate(const ProjectionSystem& system, const QdiscOptions& options) {
  if (options.restarts < 1) throw Error(ErrorCode::InvalidArgument, "restarts must be >= 1");
  if (options.sweeps < 0) throw Error(ErrorCode::InvalidArgument, "sweeps must be >= 0");
  const int n = system.dim();
  const SystemEvaluator evaluator(system);

  std::vector<Candidate> candidates;
  for (int k = 0; k <= n; ++k) {
    for (int r = 0; r < options.restarts; ++r) {
      candidates.push_back({k, Matrix(), false});
    }
  }
  for (const auto& ws : options.warm_starts) {
    if (ws.dim() != n) throw Error(ErrorCode::DimMismatch, "warm start has the wrong size");
    candidates.push_back({ws.plus_count(), unitary_of(ws), true});
  }

  auto max_sq = [&](const QuantumColoring& chi) {
    const auto v = evaluator.squared_objectives(chi);
    return *std::max_element(v.begin(), v.end());
  };

  // Haar starts; restart r of plus-count k always uses the same stream.
  parallel_for(candidates.size(), options.threads, [&](std::size_t i) {
    Candidate& c = candidates[i];
    if (!c.warm) {
      const auto restart = static_cast<std::uint64_t>(i % static_cast<std::size_t>(options.restarts));
      Rng rng = make_rng(derive_seed(options.seed, static_cast<std::uint64_t>(c.k)), restart);
      c.u = haar_unitary(n, rng);
    }
    c.value_sq = max_sq(QuantumColoring::from_unitary(c.u, c.k));
  });

  std::vector<char> refine(candidates.size(), options.sweeps > 0 ? 1 : 0);
  if (options.sweeps > 0 && options.refine_top > 0) {
    std::vector<std::pair<double, int>> per_k;
    for (int k = 0; k <= n; ++k) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& c : candidates) {
        if (!c.warm && c.k == k) best = std::min(best, c.value_sq);
      }
      per_k.emplace_back(best, k);
    }
    std::sort(per_k.begin(), per_k.end());
    std::vector<char> chosen(static_cast<std::size_t>(n) + 1, 0);
    for (int i = 0; i < std::min<int>(options.refine_top, n + 1); ++i) {
      chosen[static_cast<std::size_t>(per_k[static_cast<std::size_t>(i)].second)] = 1;
    }
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      refine[i] = candidates[i].warm || chosen[static_cast<std::size_t>(candidates[i].k)];
    }
  }

  parallel_for(candidates.size(), options.threads, [&](std::size_t i) {
    if (!refine[i]) return;
    Candidate& c = candidates[i];
    RotationSearch search(system, c.u, c.k);
    for (int s = 0; s < options.sweeps; ++s) {
      if (!search.sweep()) {
        c.converged = true;
        break;
      }
    }
    c.u = search.unitary();
    c.value_sq = max_sq(QuantumColoring::from_unitary(c.u, c.k));
  });

  std::size_t best = 0;
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    if (candidates[i].value_sq < candidates[best].value_sq) best = i;
  }
  const Candidate& win = candidates[best];
  QuantumColoring witness = QuantumColoring::from_unitary(win.u, win.k);
  const double value = max_objective(system, witness);
  return {value, std::move(witness), win.k, options.restarts, win.converged};
}

double delta_p(int n, int rank, std::size_t m, double c) {
  if (n < 2) throw Error(ErrorCode::DegenerateDim, "Delta_P needs N >= 2");
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "M must be >= 1");
  if (!(c > 0.0)) throw Error(ErrorCode::InvalidArgument, "c must be positive");
  if (rank < 0 || rank > n) throw Error(ErrorCode::InvalidArgument, "rank outside [0, N]");
  const double nn = n;
  const double r = rank;
  const double denom = nn * nn - 1.0;
  const double inner = std::log(8.0 * static_cast<double>(m)) / c + nn * nn / denom * r - nn / denom * r * r;
  return std::numbers::sqrt2 * (std::sqrt(inner) + r / nn);
}

double delta_p(const OrthogonalProjection& p, std::size_t m, double c) {
  return delta_p(p.dim(), p.rank(), m, c);
}

DeltaEventRecord check_delta_event(const ProjectionSystem& system, const QuantumColoring& chi, double c) {
  if (chi.dim() != system.dim()) throw Error(ErrorCode::DimMismatch, "coloring size differs from system");
  DeltaEventRecord rec;
  rec.all_satisfied = true;
  for (const auto& p : system.projections()) {
    const double v = objective(chi, p).value;
    const double t = delta_p(p, system.size(), c);
    rec.objective_values.push_back(v);
    rec.thresholds.push_back(t);
    rec.satisfied.push_back(v <= t ? 1 : 0);
    rec.all_satisfied = rec.all_satisfied && v <= t;
  }
  return rec;
}

LipschitzRecord lipschitz_check(const OrthogonalProjection& p, const QuantumColoring& chi1,
                                const QuantumColoring& chi2) {
  const int n = p.dim();
  if (chi1.dim() != n || chi2.dim() != n) throw Error(ErrorCode::DimMismatch, "sizes differ");
  if (p.rank() != n / 2) {
    std::ostringstream os;
    os << "rank " << p.rank() << " differs from floor(N/2) = " << n / 2;
    throw Error(ErrorCode::RankMismatch, os.str());
  }
  const ObjectiveValue o1 = objective(chi1, p);
  const ObjectiveValue o2 = objective(chi2, p);
  const double dist = (chi1.matrix() - chi2.matrix()).norm();
  const double tr1 = (chi1.matrix() * p.matrix()).trace().real();
  const double tr2 = (chi2.matrix() * p.matrix()).trace().real();
  return {std::abs(std::abs(tr1) - std::abs(tr2)), std::sqrt(n / 2.0) * dist,
          std::abs(o1.commutator_term - o2.commutator_term), 2.0 * n * dist};
}

}  // namespace qdlab
