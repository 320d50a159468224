#include "modquad/allocation.hpp"

#include "modquad/parallel.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <random>

namespace modquad {

Eigen::VectorXd min_norm_allocation(const ConfigurationMatrix& a, const Wrench& w) {
  if (!w.finite()) throw ValidationError("wrench has non-finite components");
  const Eigen::MatrixXd m = a.entries;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  const double cutoff = s.size() > 0 ? kTol.pinv_rank * s[0] : 0.0;
  const Eigen::VectorXd uw = svd.matrixU().transpose() * w.stacked();
  Eigen::VectorXd scaled = Eigen::VectorXd::Zero(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] > cutoff) scaled[i] = uw[i] / s[i];
  }
  return svd.matrixV() * scaled;
}

TruncatedInput truncate_input(const Eigen::VectorXd& u, double f_max) {
  if (!u.allFinite()) throw ValidationError("input vector has non-finite entries");
  TruncatedInput out{u.cwiseMax(0.0).cwiseMin(f_max), false};
  out.saturated = (out.input - u).cwiseAbs().maxCoeff() > kTol.saturation;
  return out;
}

AllocationReport evaluate_task_trace(const ConfigurationMatrix& a, const TaskRequirement& task,
                                     double f_max, AllocationMode mode, unsigned threads) {
  AllocationReport report;
  report.rows.resize(task.size());
  parallel_for(task.size(), threads, [&](std::size_t i) {
    AllocationRow& row = report.rows[i];
    row.desired = task.wrenches[i];
    std::optional<Eigen::VectorXd> in_box;
    if (mode == AllocationMode::Feasibility) in_box = feasible_input(a, row.desired, f_max);
    row.raw = in_box ? *in_box : min_norm_allocation(a, row.desired);
    const TruncatedInput t = truncate_input(row.raw, f_max);
    row.input = t.input;
    row.saturated = t.saturated;
    row.achieved = a.apply(row.input);
    row.error = (row.achieved - row.desired.stacked()).norm();
  });
  for (const auto& row : report.rows) {
    report.max_error = std::max(report.max_error, row.error);
    report.any_saturated = report.any_saturated || row.saturated;
  }
  return report;
}

TaskRequirement generate_random_task(int count, double half_range, double fz_scale,
                                     std::uint64_t seed) {
  if (count <= 0) throw ValidationError("task wrench count must be positive");
  if (!(half_range > 0.0) || !std::isfinite(half_range)) {
    throw ValidationError("half_range must be positive");
  }
  if (!std::isfinite(fz_scale)) throw ValidationError("fz_scale must be finite");

  // Raw 53-bit draws keep the stream identical across standard libraries,
  // unlike std::uniform_real_distribution.
  std::mt19937_64 rng(seed);
  auto uniform_open = [&] {
    for (;;) {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      if (u > 0.0) return -half_range + 2.0 * half_range * u;
    }
  };
  TaskRequirement task;
  task.wrenches.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    Vector6 w;
    for (int k = 0; k < 6; ++k) w[k] = uniform_open();
    w[2] *= fz_scale;
    task.wrenches.emplace_back(w);
  }
  return task;
}

}  // namespace modquad
