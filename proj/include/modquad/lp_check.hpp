#pragma once

#include "modquad/core_types.hpp"
#include "modquad/lp.hpp"
#include "modquad/structure.hpp"

#include <optional>
#include <vector>

namespace modquad {

/// Finite set of wrenches a structure must be able to generate.
struct TaskRequirement {
  std::vector<Wrench> wrenches;

  std::size_t size() const { return wrenches.size(); }
  bool empty() const { return wrenches.empty(); }
};

/// Largest magnitude reachable along a direction, with an achieving input.
struct DirectionalCapacity {
  double lambda = 0.0;
  Eigen::VectorXd input;
};

/// maximize lambda  s.t.  0 <= u <= f_max,  A u = lambda * w_hat,  lambda >= 0.
///
/// `w_hat` must be unit length (ValidationError otherwise).
DirectionalCapacity max_lambda(const ConfigurationMatrix& a, const Vector6& w_hat, double f_max);

/// Same program with the torque pinned to zero: w_hat = (f_hat; 0, 0, 0).
double max_force_zero_torque(const ConfigurationMatrix& a, const Vec3& f_hat, double f_max);

/// True iff max_lambda along w / |w| reaches |w| (less the boundary slack).
/// Wrenches of norm below 1e-12 count as zero and are always satisfiable.
bool satisfies_wrench(const ConfigurationMatrix& a, const Wrench& w, double f_max);

struct TaskVerdict {
  bool satisfied = true;
  std::optional<std::size_t> failing_index;  // smallest failing wrench index

  explicit operator bool() const { return satisfied; }
};

/// Conjunction of satisfies_wrench over the task. With threads > 1 the
/// wrenches are checked concurrently; the reported index is still the
/// smallest failing one.
TaskVerdict satisfies_task(const ConfigurationMatrix& a, const TaskRequirement& task, double f_max,
                           unsigned threads = 1);

/// Input u in [0, f_max] with A u = w, if one exists.
std::optional<Eigen::VectorXd> feasible_input(const ConfigurationMatrix& a, const Wrench& w,
                                              double f_max);

}  // namespace modquad
