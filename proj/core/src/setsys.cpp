#include "qdlab/setsys.hpp"

#include <algorithm>
#include <memory>
#include <set>
#include <sstream>

#include "qdlab/error.hpp"
#include "qdlab/random.hpp"

namespace qdlab {

SetSystem::SetSystem(int ground_size, std::vector<Subset> sets)
    : ground_size_(ground_size), sets_(std::move(sets)) {
  if (ground_size_ < 1) throw Error(ErrorCode::InvalidSetSystem, "ground size must be >= 1");
  if (sets_.empty()) throw Error(ErrorCode::InvalidSetSystem, "a set system needs M >= 1 sets");
  for (std::size_t s = 0; s < sets_.size(); ++s) {
    const Subset& set = sets_[s];
    for (std::size_t i = 0; i < set.size(); ++i) {
      if (set[i] < 1 || set[i] > ground_size_) {
        std::ostringstream os;
        os << "set " << s << " contains " << set[i] << " outside [1, " << ground_size_ << "]";
        throw Error(ErrorCode::InvalidSetSystem, os.str());
      }
      if (i > 0 && set[i] <= set[i - 1]) {
        std::ostringstream os;
        os << "set " << s << " is not sorted and duplicate-free";
        throw Error(ErrorCode::InvalidSetSystem, os.str());
      }
    }
  }
}

Coloring::Coloring(std::vector<int> signs) : signs_(std::move(signs)) {
  if (signs_.empty()) throw Error(ErrorCode::InvalidColoring, "empty coloring");
  for (int s : signs_) {
    if (s != 1 && s != -1) throw Error(ErrorCode::InvalidColoring, "entries must be -1 or +1");
  }
}

Coloring Coloring::all_plus(int n) { return Coloring(std::vector<int>(static_cast<std::size_t>(n), 1)); }

ProjectionSystem::ProjectionSystem(std::vector<OrthogonalProjection> projections)
    : projections_(std::move(projections)) {
  if (projections_.empty()) throw Error(ErrorCode::InvalidArgument, "projection system needs M >= 1");
  const int n = projections_.front().dim();
  for (const auto& p : projections_) {
    if (p.dim() != n) throw Error(ErrorCode::DimMismatch, "projections of different dimensions");
  }
}

SetSystem arithmetic_progressions(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "N must be >= 1");
  std::set<Subset> seen;
  for (int a = 1; a <= n; ++a) {
    for (int d = 1; d <= n; ++d) {
      Subset progression;
      // Increasing l only appends elements; stop once they leave [N].
      for (int l = 0; l <= n; ++l) {
        const int x = a + l * d;
        if (x > n) break;
        progression.push_back(x);
        if (l >= 1) seen.insert(progression);
      }
      // l >= 1 with a + d > N still yields the singleton {a}.
      seen.insert(Subset{a});
    }
  }
  std::vector<Subset> sets(seen.begin(), seen.end());
  std::stable_sort(sets.begin(), sets.end(),
                   [](const Subset& x, const Subset& y) { return x.size() < y.size(); });
  return SetSystem(n, std::move(sets));
}

SetSystem random_set_system(int n, int m, std::uint64_t seed) {
  if (n < 1 || m < 1) throw Error(ErrorCode::InvalidArgument, "N and M must be >= 1");
  Rng rng = make_rng(seed);
  std::vector<Subset> sets(static_cast<std::size_t>(m));
  for (auto& set : sets) {
    for (int i = 1; i <= n; ++i) {
      if (rng() >> 63) set.push_back(i);
    }
  }
  return SetSystem(n, std::move(sets));
}

ProjectionSystem to_projection_system(const SetSystem& system) {
  const auto n = static_cast<std::size_t>(system.ground_size());
  std::vector<OrthogonalProjection> out;
  out.reserve(system.size());
  // std::vector<bool> is not contiguous, so a plain bool array backs the span.
  auto flags = std::make_unique<bool[]>(n);
  for (const Subset& set : system.sets()) {
    std::fill(flags.get(), flags.get() + n, false);
    for (int i : set) flags[static_cast<std::size_t>(i - 1)] = true;
    out.push_back(OrthogonalProjection::diagonal(std::span<const bool>(flags.get(), n)));
  }
  return ProjectionSystem(std::move(out));
}

std::vector<int> evaluate_coloring(const SetSystem& system, const Coloring& coloring) {
  if (coloring.size() != system.ground_size()) {
    throw Error(ErrorCode::DimMismatch, "coloring length differs from ground size");
  }
  std::vector<int> sums;
  sums.reserve(system.size());
  for (const Subset& set : system.sets()) {
    int s = 0;
    for (int i : set) s += coloring[static_cast<std::size_t>(i - 1)];
    sums.push_back(s);
  }
  return sums;
}

Eigen::MatrixXi incidence_matrix(const SetSystem& system) {
  Eigen::MatrixXi a = Eigen::MatrixXi::Zero(static_cast<Eigen::Index>(system.size()), system.ground_size());
  for (std::size_t r = 0; r < system.size(); ++r) {
    for (int i : system[r]) a(static_cast<Eigen::Index>(r), i - 1) = 1;
  }
  return a;
}

nlohmann::json to_json(const SetSystem& system) {
  return {{"n", system.ground_size()}, {"sets", system.sets()}};
}

SetSystem set_system_from_json(const nlohmann::json& j) {
  try {
    if (!j.is_object() || !j.contains("n") || !j.contains("sets")) {
      throw Error(ErrorCode::ParseError, "set system JSON needs keys \"n\" and \"sets\"");
    }
    return SetSystem(j.at("n").get<int>(), j.at("sets").get<std::vector<Subset>>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
      row.push_back({m(i, k).real(), m(i, k).imag()});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const nlohmann::json& j) {
  try {
    if (!j.is_array() || j.empty()) throw Error(ErrorCode::ParseError, "matrix must be a non-empty 2-D array");
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = static_cast<Eigen::Index>(j.at(0).size());
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
      const auto& row = j.at(static_cast<std::size_t>(i));
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
        throw Error(ErrorCode::ParseError, "ragged matrix rows");
      }
      for (Eigen::Index k = 0; k < cols; ++k) {
        const auto& entry = row.at(static_cast<std::size_t>(k));
        if (entry.is_number()) {
          m(i, k) = Complex(entry.get<double>(), 0.0);
        } else if (entry.is_array() && entry.size() == 2) {
          m(i, k) = Complex(entry.at(0).get<double>(), entry.at(1).get<double>());
        } else {
          throw Error(ErrorCode::ParseError, "matrix entries must be [re, im] pairs");
        }
      }
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

nlohmann::json to_json(const ProjectionSystem& system) {
  nlohmann::json ps = nlohmann::json::array();
  for (const auto& p : system.projections()) ps.push_back(matrix_to_json(p.matrix()));
  return {{"n", system.dim()}, {"projections", std::move(ps)}};
}

ProjectionSystem projection_system_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("projections")) {
    throw Error(ErrorCode::ParseError, "projection system JSON needs key \"projections\"");
  }
  std::vector<OrthogonalProjection> ps;
  for (const auto& mj : j.at("projections")) {
    ps.push_back(OrthogonalProjection::from_matrix(make_hermitian(matrix_from_json(mj))));
  }
  if (ps.empty()) throw Error(ErrorCode::ParseError, "empty projection list");
  ProjectionSystem system(std::move(ps));
  if (j.contains("n") && j.at("n").get<int>() != system.dim()) {
    throw Error(ErrorCode::DimMismatch, "\"n\" disagrees with matrix size");
  }
  return system;
}

}  // namespace qdlab
