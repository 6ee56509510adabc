#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "qdlab/matcore.hpp"

namespace qdlab {

/// Sorted, duplicate-free list of 1-based ground elements.
using Subset = std::vector<int>;

/// Family of subsets of the ground set [N] = {1..N}.
class SetSystem {
 public:
  /// Validates indices in [1, N], sorted and duplicate-free subsets, M >= 1.
  SetSystem(int ground_size, std::vector<Subset> sets);

  int ground_size() const noexcept { return ground_size_; }
  std::size_t size() const noexcept { return sets_.size(); }
  const std::vector<Subset>& sets() const noexcept { return sets_; }
  const Subset& operator[](std::size_t i) const { return sets_[i]; }

  friend bool operator==(const SetSystem&, const SetSystem&) = default;

 private:
  int ground_size_;
  std::vector<Subset> sets_;
};

/// A +-1 coloring of [N]; entry i colors ground element i + 1.
class Coloring {
 public:
  explicit Coloring(std::vector<int> signs);
  static Coloring all_plus(int n);

  int size() const noexcept { return static_cast<int>(signs_.size()); }
  std::span<const int> signs() const noexcept { return signs_; }
  int operator[](std::size_t i) const { return signs_[i]; }

  friend bool operator==(const Coloring&, const Coloring&) = default;

 private:
  std::vector<int> signs_;
};

/// Ordered family of orthogonal projections sharing one dimension.
class ProjectionSystem {
 public:
  explicit ProjectionSystem(std::vector<OrthogonalProjection> projections);

  int dim() const noexcept { return projections_.front().dim(); }
  std::size_t size() const noexcept { return projections_.size(); }
  const std::vector<OrthogonalProjection>& projections() const noexcept { return projections_; }
  const OrthogonalProjection& operator[](std::size_t i) const { return projections_[i]; }

 private:
  std::vector<OrthogonalProjection> projections_;
};

/// Deduplicated family {a + kd : k = 0..l} ∩ [N] over a, d, l in [N], empty
/// sets dropped, ordered by (size, lexicographic).
SetSystem arithmetic_progressions(int n);

/// M subsets, each element included independently with probability 1/2.
SetSystem random_set_system(int n, int m, std::uint64_t seed);

/// Diagonal 0/1 projection per set, order preserved.
ProjectionSystem to_projection_system(const SetSystem& system);

/// Signed sums chi(S) for every set.
std::vector<int> evaluate_coloring(const SetSystem& system, const Coloring& coloring);

/// M x N 0/1 matrix, A(i, j) = 1 iff element j + 1 belongs to set i.
Eigen::MatrixXi incidence_matrix(const SetSystem& system);

// JSON: {"n": N, "sets": [[1,3,5], ...]} with 1-based indices.
nlohmann::json to_json(const SetSystem& system);
SetSystem set_system_from_json(const nlohmann::json& j);

// JSON: {"n": N, "projections": [matrix, ...]}, matrices as 2-D arrays of
// [re, im] pairs.
nlohmann::json to_json(const ProjectionSystem& system);
ProjectionSystem projection_system_from_json(const nlohmann::json& j);

// Dense complex matrix as a 2-D array of [re, im] pairs.
nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);

}  // namespace qdlab
