#pragma once

#include "modquad/core_types.hpp"
#include "modquad/lp_check.hpp"
#include "modquad/structure.hpp"

#include <span>
#include <vector>

namespace modquad {

/// Largest column count accepted by the brute-force binary enumeration
/// (2^cols points).
inline constexpr Eigen::Index kBinaryImageColumnLimit = 20;

struct PointSet6 {
  std::vector<Vector6> points;

  std::size_t size() const { return points.size(); }
};

/// Irredundant vertex representation of a convex polytope in wrench space.
class WrenchHull {
 public:
  WrenchHull() = default;
  /// Takes the vertices as given; use prune_redundant to build from an
  /// arbitrary point cloud.
  explicit WrenchHull(std::vector<Vector6> vertices);

  const std::vector<Vector6>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  /// Affine dimension of the vertex set (the origin is always a member).
  int dimension() const { return dimension_; }

 private:
  std::vector<Vector6> vertices_;
  int dimension_ = 0;
};

/// All 2^cols images A u with u in {0, f_max}^cols, in binary-counter order
/// (bit k of the index selects column k). Throws CapacityError past
/// kBinaryImageColumnLimit columns.
PointSet6 enumerate_binary_images(const ConfigurationMatrix& a, double f_max);

/// True iff p lies within `tol` (L1 residual) of the convex hull of
/// `points`. Solved as a feasibility LP over convex weights.
bool in_convex_hull(std::span<const Vector6> points, const Vector6& p,
                    double tol = kTol.redundancy);

/// Removes every point that is a convex combination of the others
/// (tolerance 1e-8). Near-duplicates collapse to their first occurrence.
WrenchHull prune_redundant(const PointSet6& points);

/// Vertices of the Minkowski sum: pruned pairwise vertex sums.
WrenchHull minkowski_merge(const WrenchHull& h1, const WrenchHull& h2);

/// Divide-and-conquer zonotope hull: single columns give {0, f_max g}, wider
/// matrices split into the first ceil(c/2) and last floor(c/2) columns and
/// are merged. Throws ValidationError for a matrix without columns.
WrenchHull construct_hull(const ConfigurationMatrix& a, double f_max);

bool hull_contains(const WrenchHull& hull, const Wrench& w);

/// Builds the hull once and tests every task wrench against it.
TaskVerdict satisfies_task_hull(const ConfigurationMatrix& a, const TaskRequirement& task,
                                double f_max, unsigned threads = 1);

/// Order-insensitive equality of two vertex lists, coordinatewise within tol.
bool same_vertex_set(std::span<const Vector6> a, std::span<const Vector6> b, double tol = 1e-8);

/// Vertices sorted lexicographically; a stable presentation for output.
std::vector<Vector6> sorted_vertices(const WrenchHull& hull);

}  // namespace modquad
