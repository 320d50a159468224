#pragma once

#include "modquad/lp_check.hpp"
#include "modquad/structure.hpp"

#include <cstdint>
#include <vector>

namespace modquad {

struct TruncatedInput {
  Eigen::VectorXd input;
  bool saturated = false;
};

/// Moore-Penrose action u = A^+ w: the smallest-norm minimizer of
/// |A u - w|. Singular values below 1e-10 of the largest count as zero.
Eigen::VectorXd min_norm_allocation(const ConfigurationMatrix& a, const Wrench& w);

/// Elementwise clamp to [0, f_max]; saturated iff an entry moved by more
/// than 1e-12.
TruncatedInput truncate_input(const Eigen::VectorXd& u, double f_max);

enum class AllocationMode {
  PseudoInverse,  // u = clamp(A^+ w)
  Feasibility,    // in-box preimage from an LP when one exists, else pseudoinverse
};

struct AllocationRow {
  Wrench desired;
  Eigen::VectorXd raw;
  Eigen::VectorXd input;
  Vector6 achieved;
  double error = 0.0;
  bool saturated = false;
};

struct AllocationReport {
  std::vector<AllocationRow> rows;
  double max_error = 0.0;
  bool any_saturated = false;
};

/// Allocates every task wrench in order and records the achieved wrench
/// A u of the truncated input.
AllocationReport evaluate_task_trace(const ConfigurationMatrix& a, const TaskRequirement& task,
                                     double f_max,
                                     AllocationMode mode = AllocationMode::PseudoInverse,
                                     unsigned threads = 1);

/// `count` wrenches with i.i.d. uniform(-half_range, half_range) components
/// from a seeded mt19937_64; the f_z component is then multiplied by
/// fz_scale. Identical arguments give identical tasks on every platform.
TaskRequirement generate_random_task(int count, double half_range, double fz_scale,
                                     std::uint64_t seed);

}  // namespace modquad
