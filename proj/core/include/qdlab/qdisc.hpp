#pragma once

#include <cstdint>
#include <vector>

#include "qdlab/matcore.hpp"
#include "qdlab/setsys.hpp"

namespace qdlab {

/// chi(P) = [(tr chi P)^2 + tr(P - (chi P)^2)]^(1/2) with both terms kept.
struct ObjectiveValue {
  double trace_term;       // (tr chi P)^2
  double commutator_term;  // tr(P - (chi P)^2) = tr(chi [chi, P] P)
  double value;
};

/// Evaluates both terms and cross-checks the commutator form
/// tr(chi [chi, P] P) against tr(P - (chi P)^2) (throws on a > 1e-9 gap).
ObjectiveValue objective(const QuantumColoring& chi, const OrthogonalProjection& p);

/// max over the system of objective(chi, P).value.
double max_objective(const ProjectionSystem& system, const QuantumColoring& chi);

/// E[(2X(S) - |S|)^2] for the projection DPP with kernel (chi + I)/2 against
/// objective(chi, P_S)^2.
struct DppConsistency {
  double expected_imbalance;
  double objective_squared;
  double difference;
};

DppConsistency objective_vs_dpp(const QuantumColoring& chi, const Subset& s);

/// The diagonal-entry identity behind objective <= N:
/// (tr chi P)^2 - tr((chi P)^2) = 2 sum_{i<j} chi'_ii chi'_jj (P'_ii P'_jj - |P'_ij|^2)
/// in the eigenbasis of chi.
struct TrivialBoundRecord {
  double lhs;
  double rhs;
  double residual;
  double objective_value;
  bool within_bound;  // objective^2 <= N^2 (+1e-9)
};

TrivialBoundRecord trivial_bound_check(const QuantumColoring& chi, const OrthogonalProjection& p);

struct QdiscOptions {
  int restarts = 4;
  int sweeps = 2;
  std::uint64_t seed = 0;
  /// Refine (Givens sweeps) only candidates of the `refine_top` plus-counts
  /// with the best restart values; 0 refines every k. With 0 the estimate is
  /// monotone non-increasing in `restarts`.
  int refine_top = 0;
  /// Extra starting colorings (for example a combinatorial witness).
  std::vector<QuantumColoring> warm_starts;
  int threads = 1;
};

struct QdiscEstimate {
  double value;  // upper estimate of qdisc
  QuantumColoring witness;
  int plus_count;
  int restarts_used;
  bool converged;  // last refinement sweep made no improvement
};

/// Upper estimate of min over colorings of the max objective. Every plus-count
/// k = 0..N gets Haar restarts chi = U D_k U*, refined by sweeps of complex
/// plane rotations (64-point angle grid plus 3 halvings per plane).
QdiscEstimate qdisc_estimate(const ProjectionSystem& system, const QdiscOptions& options = {});

/// sqrt(2) [ sqrt(log(8M)/c + N^2 r/(N^2-1) - N r^2/(N^2-1)) + r/N ].
/// Throws DegenerateDim for N = 1.
double delta_p(int n, int rank, std::size_t m, double c);
double delta_p(const OrthogonalProjection& p, std::size_t m, double c);

struct DeltaEventRecord {
  std::vector<double> objective_values;
  std::vector<double> thresholds;
  std::vector<char> satisfied;
  bool all_satisfied;
};

DeltaEventRecord check_delta_event(const ProjectionSystem& system, const QuantumColoring& chi, double c);

/// Both Lipschitz estimates for a projection of rank floor(N/2):
/// | |tr chi1 P| - |tr chi2 P| | <= sqrt(N/2) ||chi1 - chi2||_2 and
/// |tr(P - (chi1 P)^2) - tr(P - (chi2 P)^2)| <= 2N ||chi1 - chi2||_2.
struct LipschitzRecord {
  double trace_gap;
  double trace_bound;
  double commutator_gap;
  double commutator_bound;

  double trace_residual() const { return trace_gap - trace_bound; }
  double commutator_residual() const { return commutator_gap - commutator_bound; }
  bool holds(double tol = 1e-9) const {
    return trace_residual() <= tol && commutator_residual() <= tol;
  }
};

LipschitzRecord lipschitz_check(const OrthogonalProjection& p, const QuantumColoring& chi1,
                                const QuantumColoring& chi2);

/// Batched objective evaluation for one coloring against a fixed system.
class SystemEvaluator {
 public:
  explicit SystemEvaluator(const ProjectionSystem& system);

  std::size_t size() const noexcept { return ranks_.size(); }
  /// objective^2 for every projection.
  std::vector<double> squared_objectives(const QuantumColoring& chi) const;

 private:
  Matrix stacked_;  // (sum of ranks) x N, rows are V_j*
  std::vector<int> ranks_;
  std::vector<Eigen::Index> offsets_;
};

}  // namespace qdlab
