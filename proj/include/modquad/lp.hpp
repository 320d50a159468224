#pragma once

#include <Eigen/Core>

#include <limits>
#include <string>

namespace modquad {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// maximize c^T x  subject to  A x = b,  lower <= x <= upper.
///
/// Lower bounds must be finite; upper bounds may be +infinity.
struct LpProblem {
  Eigen::VectorXd objective;
  Eigen::MatrixXd a_eq;
  Eigen::VectorXd b_eq;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  Eigen::Index variables() const { return objective.size(); }
  Eigen::Index rows() const { return a_eq.rows(); }

  /// Throws ValidationError on inconsistent dimensions, non-finite data or
  /// crossed bounds.
  void validate() const;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

std::string to_string(LpStatus s);

struct LpOptions {
  double feasibility_tol = 1e-9;  // accepted sum of phase-one artificials
  double optimality_tol = 1e-11;  // reduced-cost threshold
  double pivot_tol = 1e-11;       // smallest usable pivot magnitude
  double bound_relax = 1e-9;      // bound slack allowed by the ratio test
  double stable_pivot = 1e-7;     // columns that need a smaller pivot are not entered
  int degenerate_switch = 50;     // consecutive degenerate pivots before Bland's rule
  double max_optimality_tol = 1e-7;  // ceiling when numerical cycling forces a looser threshold
  bool objective_only_feasibility = false;  // stop after phase one
};

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  Eigen::VectorXd x;
  double objective = 0.0;
  double infeasibility = 0.0;  // phase-one optimum (sum of artificials)
  Eigen::VectorXd duals;       // row multipliers of the final basis
  int iterations = 0;

  bool optimal() const { return status == LpStatus::Optimal; }
};

/// Two-phase bounded-variable primal simplex. The basis is refactorized on
/// every iteration, so solutions carry no accumulated update error. Pricing
/// is Dantzig until a run of degenerate pivots, then Bland's smallest-index
/// rule, which guarantees termination.
LpSolution solve_lp(const LpProblem& problem, const LpOptions& options = {});

}  // namespace modquad
