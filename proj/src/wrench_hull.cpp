#include "modquad/wrench_hull.hpp"

#include "modquad/lp.hpp"
#include "modquad/parallel.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <atomic>
#include <cmath>

namespace modquad {

namespace {

int affine_dimension(const std::vector<Vector6>& vertices) {
  if (vertices.size() < 2) return 0;
  Eigen::MatrixXd m(6, static_cast<Eigen::Index>(vertices.size()) - 1);
  for (std::size_t i = 1; i < vertices.size(); ++i) {
    m.col(static_cast<Eigen::Index>(i) - 1) = vertices[i] - vertices[0];
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] > 1e-9) ++rank;
  }
  return rank;
}

bool near(const Vector6& a, const Vector6& b, double tol) {
  return (a - b).cwiseAbs().maxCoeff() <= tol;
}

WrenchHull hull_of_columns(const Matrix6X& a, Eigen::Index first, Eigen::Index count,
                           double f_max) {
  if (count == 1) {
    PointSet6 base;
    base.points = {Vector6::Zero(), f_max * a.col(first)};
    return prune_redundant(base);
  }
  const Eigen::Index left = (count + 1) / 2;
  const WrenchHull h1 = hull_of_columns(a, first, left, f_max);
  const WrenchHull h2 = hull_of_columns(a, first + left, count - left, f_max);
  return minkowski_merge(h1, h2);
}

}  // namespace

WrenchHull::WrenchHull(std::vector<Vector6> vertices)
    : vertices_(std::move(vertices)), dimension_(affine_dimension(vertices_)) {}

PointSet6 enumerate_binary_images(const ConfigurationMatrix& a, double f_max) {
  const Eigen::Index cols = a.columns();
  if (cols > kBinaryImageColumnLimit) {
    throw CapacityError("binary enumeration of " + std::to_string(cols) + " columns needs 2^" +
                        std::to_string(cols) + " points; limit is " +
                        std::to_string(kBinaryImageColumnLimit) + " columns");
  }
  const std::size_t count = std::size_t{1} << cols;
  PointSet6 out;
  out.points.reserve(count);
  for (std::size_t mask = 0; mask < count; ++mask) {
    Vector6 p = Vector6::Zero();
    for (Eigen::Index k = 0; k < cols; ++k) {
      if (mask & (std::size_t{1} << k)) p += a.entries.col(k);
    }
    out.points.push_back(f_max * p);
  }
  return out;
}

bool in_convex_hull(std::span<const Vector6> points, const Vector6& p, double tol) {
  if (points.empty()) return false;
  const auto n = static_cast<Eigen::Index>(points.size());
  LpProblem lp;
  lp.objective = Eigen::VectorXd::Zero(n);
  lp.a_eq.resize(7, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    lp.a_eq.col(i).head<6>() = points[static_cast<std::size_t>(i)];
    lp.a_eq(6, i) = 1.0;
  }
  lp.b_eq.resize(7);
  lp.b_eq.head<6>() = p;
  lp.b_eq[6] = 1.0;
  lp.lower = Eigen::VectorXd::Zero(n);
  lp.upper = Eigen::VectorXd::Constant(n, kInfinity);
  LpOptions opt;
  opt.feasibility_tol = tol;
  opt.objective_only_feasibility = true;
  return solve_lp(lp, opt).optimal();
}

WrenchHull prune_redundant(const PointSet6& points) {
  if (points.points.empty()) throw ValidationError("cannot build a hull from no points");

  std::vector<Vector6> kept;
  kept.reserve(points.size());
  for (const auto& p : points.points) {
    if (!p.allFinite()) throw ValidationError("point set has non-finite coordinates");
    const bool dup = std::any_of(kept.begin(), kept.end(),
                                 [&](const Vector6& q) { return near(p, q, kTol.redundancy); });
    if (!dup) kept.push_back(p);
  }

  // Dropping a point that lies in the hull of the rest never changes the
  // hull, and can never make a point we keep redundant, so one forward pass
  // yields the irredundant set.
  std::vector<Vector6> others;
  others.reserve(kept.size());
  std::size_t i = 0;
  while (i < kept.size() && kept.size() > 1) {
    others.clear();
    for (std::size_t j = 0; j < kept.size(); ++j) {
      if (j != i) others.push_back(kept[j]);
    }
    if (in_convex_hull(others, kept[i])) {
      kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(i));
    } else {
      ++i;
    }
  }
  return WrenchHull(std::move(kept));
}

WrenchHull minkowski_merge(const WrenchHull& h1, const WrenchHull& h2) {
  PointSet6 sums;
  sums.points.reserve(h1.size() * h2.size());
  for (const auto& v1 : h1.vertices()) {
    for (const auto& v2 : h2.vertices()) sums.points.push_back(v1 + v2);
  }
  return prune_redundant(sums);
}

WrenchHull construct_hull(const ConfigurationMatrix& a, double f_max) {
  if (a.columns() == 0) throw ValidationError("configuration matrix has no columns");
  if (!(f_max > 0.0) || !std::isfinite(f_max)) throw ValidationError("f_max must be positive");
  return hull_of_columns(a.entries, 0, a.columns(), f_max);
}

bool hull_contains(const WrenchHull& hull, const Wrench& w) {
  if (!w.finite()) throw ValidationError("wrench has non-finite components");
  return in_convex_hull(hull.vertices(), w.stacked());
}

TaskVerdict satisfies_task_hull(const ConfigurationMatrix& a, const TaskRequirement& task,
                                double f_max, unsigned threads) {
  const WrenchHull hull = construct_hull(a, f_max);
  std::atomic<std::size_t> first_failure{task.size()};
  parallel_for(task.size(), threads, [&](std::size_t i) {
    if (i > first_failure.load()) return;
    if (!hull_contains(hull, task.wrenches[i])) {
      std::size_t cur = first_failure.load();
      while (i < cur && !first_failure.compare_exchange_weak(cur, i)) {
      }
    }
  });
  TaskVerdict verdict;
  if (first_failure.load() < task.size()) {
    verdict.satisfied = false;
    verdict.failing_index = first_failure.load();
  }
  return verdict;
}

bool same_vertex_set(std::span<const Vector6> a, std::span<const Vector6> b, double tol) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  for (const auto& p : a) {
    bool matched = false;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (!used[j] && near(p, b[j], tol)) {
        used[j] = true;
        matched = true;
        break;
      }
    }
    if (!matched) return false;
  }
  return true;
}

std::vector<Vector6> sorted_vertices(const WrenchHull& hull) {
  std::vector<Vector6> v = hull.vertices();
  std::sort(v.begin(), v.end(), [](const Vector6& x, const Vector6& y) {
    return std::lexicographical_compare(x.data(), x.data() + 6, y.data(), y.data() + 6);
  });
  return v;
}

}  // namespace modquad
