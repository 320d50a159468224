#include "modquad/lp_check.hpp"

#include "modquad/parallel.hpp"

#include <atomic>
#include <cmath>

namespace modquad {

namespace {

void require_unit(double norm, const char* what) {
  if (!std::isfinite(norm) || std::abs(norm - 1.0) > kTol.unit_norm) {
    throw ValidationError(std::string(what) + " must be a unit vector");
  }
}

// Variables [u_1 .. u_c, lambda]; rows A u - lambda * w_hat = 0.
LpProblem directional_program(const Matrix6X& a, const Vector6& w_hat, double f_max) {
  const Eigen::Index c = a.cols();
  LpProblem p;
  p.objective = Eigen::VectorXd::Zero(c + 1);
  p.objective[c] = 1.0;
  p.a_eq.resize(6, c + 1);
  p.a_eq.leftCols(c) = a;
  p.a_eq.col(c) = -w_hat;
  p.b_eq = Eigen::VectorXd::Zero(6);
  p.lower = Eigen::VectorXd::Zero(c + 1);
  p.upper = Eigen::VectorXd::Constant(c + 1, f_max);
  p.upper[c] = kInfinity;
  return p;
}

}  // namespace

DirectionalCapacity max_lambda(const ConfigurationMatrix& a, const Vector6& w_hat, double f_max) {
  require_unit(w_hat.norm(), "wrench direction");
  if (!(f_max > 0.0) || !std::isfinite(f_max)) throw ValidationError("f_max must be positive");

  const LpSolution sol = solve_lp(directional_program(a.entries, w_hat, f_max));
  // u = 0, lambda = 0 is always feasible and lambda is bounded by the box,
  // so anything but an optimum is a solver fault.
  if (!sol.optimal()) {
    throw std::runtime_error("directional capacity LP returned " + to_string(sol.status));
  }
  const Eigen::Index c = a.columns();
  return {std::max(0.0, sol.x[c]), sol.x.head(c)};
}

double max_force_zero_torque(const ConfigurationMatrix& a, const Vec3& f_hat, double f_max) {
  require_unit(f_hat.norm(), "force direction");
  Vector6 w_hat;
  w_hat << f_hat, Vec3::Zero();
  return max_lambda(a, w_hat, f_max).lambda;
}

bool satisfies_wrench(const ConfigurationMatrix& a, const Wrench& w, double f_max) {
  if (!w.finite()) throw ValidationError("wrench has non-finite components");
  const Vector6 v = w.stacked();
  const double magnitude = v.norm();
  if (magnitude < kTol.zero_wrench) return true;
  return max_lambda(a, v / magnitude, f_max).lambda >= magnitude - kTol.wrench_boundary;
}

TaskVerdict satisfies_task(const ConfigurationMatrix& a, const TaskRequirement& task, double f_max,
                           unsigned threads) {
  TaskVerdict verdict;
  if (threads <= 1) {
    for (std::size_t i = 0; i < task.size(); ++i) {
      if (!satisfies_wrench(a, task.wrenches[i], f_max)) {
        verdict.satisfied = false;
        verdict.failing_index = i;
        return verdict;
      }
    }
    return verdict;
  }

  std::atomic<std::size_t> first_failure{task.size()};
  parallel_for(task.size(), threads, [&](std::size_t i) {
    if (i > first_failure.load()) return;
    if (!satisfies_wrench(a, task.wrenches[i], f_max)) {
      std::size_t cur = first_failure.load();
      while (i < cur && !first_failure.compare_exchange_weak(cur, i)) {
      }
    }
  });
  if (first_failure.load() < task.size()) {
    verdict.satisfied = false;
    verdict.failing_index = first_failure.load();
  }
  return verdict;
}

std::optional<Eigen::VectorXd> feasible_input(const ConfigurationMatrix& a, const Wrench& w,
                                              double f_max) {
  const Eigen::Index c = a.columns();
  LpProblem p;
  p.objective = Eigen::VectorXd::Zero(c);
  p.a_eq = a.entries;
  p.b_eq = w.stacked();
  p.lower = Eigen::VectorXd::Zero(c);
  p.upper = Eigen::VectorXd::Constant(c, f_max);
  LpOptions opt;
  opt.objective_only_feasibility = true;
  const LpSolution sol = solve_lp(p, opt);
  if (!sol.optimal()) return std::nullopt;
  return sol.x;
}

}  // namespace modquad
