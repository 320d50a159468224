#include "modquad/lp.hpp"

#include "modquad/core_types.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

namespace modquad {

std::string to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
  }
  return "unknown";
}

void LpProblem::validate() const {
  const Eigen::Index n = objective.size();
  if (a_eq.cols() != n && a_eq.rows() > 0) {
    throw ValidationError("LP constraint matrix has " + std::to_string(a_eq.cols()) +
                          " columns for " + std::to_string(n) + " variables");
  }
  if (a_eq.rows() != b_eq.size()) throw ValidationError("LP right-hand side size mismatch");
  if (lower.size() != n || upper.size() != n) throw ValidationError("LP bound size mismatch");
  if (!objective.allFinite() || !a_eq.allFinite() || !b_eq.allFinite()) {
    throw ValidationError("LP data must be finite");
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    if (!std::isfinite(lower[j])) throw ValidationError("LP lower bounds must be finite");
    if (std::isnan(upper[j]) || upper[j] < lower[j]) {
      throw ValidationError("LP bounds crossed at variable " + std::to_string(j));
    }
  }
}

namespace {

enum class Bound { Lower, Upper, Basic };

// Working problem in shifted form: 0 <= x <= ub, columns [A | I], b >= 0.
class Simplex {
 public:
  Simplex(const LpProblem& p, const LpOptions& opt) : opt_(opt), optimality_tol_(opt.optimality_tol) {
    m_ = p.rows();
    n_ = p.variables();
    total_ = n_ + m_;

    a_.resize(m_, total_);
    a_.leftCols(n_) = p.a_eq;
    a_.rightCols(m_).setIdentity();
    b_ = p.b_eq - p.a_eq * p.lower;
    row_sign_ = Eigen::VectorXd::Ones(m_);
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (b_[i] < 0.0) {
        row_sign_[i] = -1.0;
        a_.row(i).head(n_) *= -1.0;
        b_[i] = -b_[i];
      }
    }
    ub_.resize(total_);
    ub_.head(n_) = p.upper - p.lower;
    ub_.tail(m_).setConstant(kInfinity);

    state_.assign(static_cast<std::size_t>(total_), Bound::Lower);
    basis_.resize(static_cast<std::size_t>(m_));
    for (Eigen::Index i = 0; i < m_; ++i) {
      basis_[static_cast<std::size_t>(i)] = n_ + i;
      state_[static_cast<std::size_t>(n_ + i)] = Bound::Basic;
    }
    x_ = Eigen::VectorXd::Zero(total_);
  }

  // Returns false if unbounded.
  bool run(const Eigen::VectorXd& cost) {
    bland_ = false;
    int degenerate_run = 0;
    // Vertices seen during the current degenerate run. A repeat under
    // Bland's rule can only come from roundoff in the reduced costs (a
    // near-singular dual), so the optimality threshold is loosened.
    std::set<std::vector<Bound>> visited;
    const long max_iter = 200L * (total_ + 10);
    for (long guard = 0; guard < max_iter; ++guard) {
      refactor();
      const Eigen::VectorXd cb = basic_costs(cost);
      const Eigen::VectorXd y = lu_.transpose().solve(cb);
      duals_ = y;

      const auto candidates = entering_candidates(cost, y);
      if (candidates.empty()) return true;

      // A tiny pivot turns bound-level slack into large moves of the basic
      // variables. When every improving column would need one, the vertex
      // is optimal to working precision.
      std::optional<Step> step;
      for (const Eigen::Index q : candidates) {
        const Step s = ratio_test(q);
        if (!std::isfinite(s.t)) return false;
        if (s.leave < 0 || s.pivot >= opt_.stable_pivot) {
          step = s;
          break;
        }
      }
      if (!step) return true;

      ++iterations_;
      if (step->t < 1e-12) {
        ++degenerate_run;
        if (bland_ && !visited.insert(state_).second) {
          if (optimality_tol_ >= opt_.max_optimality_tol) {
            throw std::runtime_error("simplex keeps cycling at the loosest optimality threshold");
          }
          optimality_tol_ = std::min(10.0 * optimality_tol_, opt_.max_optimality_tol);
          visited.clear();
          continue;
        }
      } else {
        degenerate_run = 0;
        visited.clear();
      }
      if (degenerate_run >= opt_.degenerate_switch) bland_ = true;
      apply(*step);
    }
    throw std::runtime_error("simplex iteration limit exceeded");
  }

  // Pivot basic artificials out wherever a structural column can replace them.
  void expel_artificials() {
    refactor();
    for (Eigen::Index r = 0; r < m_; ++r) {
      if (basis_[static_cast<std::size_t>(r)] < n_) continue;
      Eigen::VectorXd er = Eigen::VectorXd::Unit(m_, r);
      const Eigen::VectorXd row = lu_.transpose().solve(er);
      Eigen::Index best = -1;
      double best_val = 1e-9;
      for (Eigen::Index j = 0; j < n_; ++j) {
        if (state_[static_cast<std::size_t>(j)] == Bound::Basic) continue;
        const double v = std::abs(row.dot(a_.col(j)));
        if (v > best_val) {
          best_val = v;
          best = j;
        }
      }
      if (best < 0) continue;  // redundant row
      const Eigen::Index out = basis_[static_cast<std::size_t>(r)];
      state_[static_cast<std::size_t>(out)] = Bound::Lower;
      basis_[static_cast<std::size_t>(r)] = best;
      state_[static_cast<std::size_t>(best)] = Bound::Basic;
      refactor();
    }
  }

  void fix_artificials() {
    for (Eigen::Index j = n_; j < total_; ++j) ub_[j] = 0.0;
  }

  void refactor() {
    Eigen::MatrixXd bmat(m_, m_);
    for (Eigen::Index i = 0; i < m_; ++i) bmat.col(i) = a_.col(basis_[static_cast<std::size_t>(i)]);
    lu_.compute(bmat);
    Eigen::VectorXd rhs = b_;
    for (Eigen::Index j = 0; j < total_; ++j) {
      const auto s = state_[static_cast<std::size_t>(j)];
      if (s == Bound::Basic) continue;
      x_[j] = s == Bound::Upper ? ub_[j] : 0.0;
      if (x_[j] != 0.0) rhs -= a_.col(j) * x_[j];
    }
    const Eigen::VectorXd xb = lu_.solve(rhs);
    for (Eigen::Index i = 0; i < m_; ++i) x_[basis_[static_cast<std::size_t>(i)]] = xb[i];
  }

  double artificial_sum() const { return x_.tail(m_).cwiseAbs().sum(); }
  Eigen::VectorXd structural() const { return x_.head(n_); }
  Eigen::VectorXd duals() const { return duals_.cwiseProduct(row_sign_); }
  int iterations() const { return iterations_; }
  Eigen::Index n() const { return n_; }
  Eigen::Index m() const { return m_; }

 private:
  struct Step {
    Eigen::Index entering = -1;
    Eigen::Index leave = -1;  // basis row, or -1 for a bound flip
    Bound leave_to = Bound::Lower;
    double t = 0.0;
    double pivot = 0.0;
  };

  // Harris two-pass ratio test: the first pass finds the longest step that
  // keeps every basic variable within `bound_relax` of its bounds, the
  // second picks the blocking row with the largest pivot among those that
  // block within that step. Under Bland's rule the smallest variable index
  // wins among the well-conditioned rows of that set.
  Step ratio_test(Eigen::Index q) const {
    const double delta = state_[static_cast<std::size_t>(q)] == Bound::Lower ? 1.0 : -1.0;
    const Eigen::VectorXd alpha = lu_.solve(a_.col(q));
    const double relax = opt_.bound_relax;

    // Basic variable i moves by dir per unit step of the entering one.
    auto blocking = [&](Eigen::Index i, double slack) -> std::pair<double, Bound> {
      const double dir = -delta * alpha[i];
      const Eigen::Index var = basis_[static_cast<std::size_t>(i)];
      if (dir < -opt_.pivot_tol) return {std::max(0.0, x_[var] + slack) / -dir, Bound::Lower};
      if (dir > opt_.pivot_tol && std::isfinite(ub_[var])) {
        return {std::max(0.0, ub_[var] - x_[var] + slack) / dir, Bound::Upper};
      }
      return {kInfinity, Bound::Lower};
    };

    double t_max = kInfinity;
    for (Eigen::Index i = 0; i < m_; ++i) t_max = std::min(t_max, blocking(i, relax).first);

    Step flip{q, -1, Bound::Lower, ub_[q], 0.0};
    if (ub_[q] <= t_max) return flip;  // also covers the unbounded case
    if (!std::isfinite(t_max)) return flip;

    double widest = 0.0;
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (blocking(i, 0.0).first <= t_max) widest = std::max(widest, std::abs(alpha[i]));
    }
    Step best;
    for (Eigen::Index i = 0; i < m_; ++i) {
      const auto [t, to] = blocking(i, 0.0);
      if (t > t_max) continue;
      const double pivot = std::abs(alpha[i]);
      bool take = best.leave < 0;
      if (!take && bland_) {
        const bool sound = pivot >= 0.1 * widest;
        const bool best_sound = best.pivot >= 0.1 * widest;
        take = sound && (!best_sound || basis_[static_cast<std::size_t>(i)] <
                                            basis_[static_cast<std::size_t>(best.leave)]);
      } else if (!take) {
        take = pivot > best.pivot;
      }
      if (take) best = {q, i, to, t, pivot};
    }
    return best;
  }

  void apply(const Step& s) {
    const auto q = static_cast<std::size_t>(s.entering);
    if (s.leave < 0) {
      state_[q] = state_[q] == Bound::Lower ? Bound::Upper : Bound::Lower;
      return;
    }
    const Eigen::Index out = basis_[static_cast<std::size_t>(s.leave)];
    state_[static_cast<std::size_t>(out)] = s.leave_to;
    basis_[static_cast<std::size_t>(s.leave)] = s.entering;
    state_[q] = Bound::Basic;
  }

  Eigen::VectorXd basic_costs(const Eigen::VectorXd& cost) const {
    Eigen::VectorXd cb(m_);
    for (Eigen::Index i = 0; i < m_; ++i) cb[i] = cost[basis_[static_cast<std::size_t>(i)]];
    return cb;
  }

  // Improving nonbasic variables: by index under Bland's rule, otherwise
  // by decreasing reduced-cost magnitude (index breaks ties).
  std::vector<Eigen::Index> entering_candidates(const Eigen::VectorXd& cost,
                                                const Eigen::VectorXd& y) const {
    std::vector<std::pair<double, Eigen::Index>> scored;
    for (Eigen::Index j = 0; j < total_; ++j) {
      const auto s = state_[static_cast<std::size_t>(j)];
      if (s == Bound::Basic || ub_[j] == 0.0) continue;
      const double d = cost[j] - y.dot(a_.col(j));
      double score = 0.0;
      if (s == Bound::Lower && d > optimality_tol_) score = d;
      if (s == Bound::Upper && d < -optimality_tol_) score = -d;
      if (score > 0.0) scored.emplace_back(bland_ ? 0.0 : -score, j);
    }
    std::stable_sort(scored.begin(), scored.end(),
                     [](const auto& l, const auto& r) { return l.first < r.first; });
    std::vector<Eigen::Index> out;
    out.reserve(scored.size());
    for (const auto& entry : scored) out.push_back(entry.second);
    return out;
  }

  LpOptions opt_;
  double optimality_tol_;
  Eigen::Index m_ = 0;
  Eigen::Index n_ = 0;
  Eigen::Index total_ = 0;
  Eigen::MatrixXd a_;
  Eigen::VectorXd b_;
  Eigen::VectorXd row_sign_;
  Eigen::VectorXd ub_;
  Eigen::VectorXd x_;
  Eigen::VectorXd duals_;
  std::vector<Bound> state_;
  std::vector<Eigen::Index> basis_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  bool bland_ = false;
  int iterations_ = 0;
};

}  // namespace

LpSolution solve_lp(const LpProblem& problem, const LpOptions& options) {
  problem.validate();
  const Eigen::Index n = problem.variables();
  const Eigen::Index m = problem.rows();

  LpSolution sol;
  sol.x = problem.lower;

  if (m == 0) {
    // Only box constraints: each variable sits at its best bound.
    for (Eigen::Index j = 0; j < n; ++j) {
      const double c = problem.objective[j];
      if (c > 0.0) {
        if (!std::isfinite(problem.upper[j])) {
          sol.status = LpStatus::Unbounded;
          return sol;
        }
        sol.x[j] = problem.upper[j];
      }
    }
    sol.status = LpStatus::Optimal;
    sol.objective = problem.objective.dot(sol.x);
    sol.duals = Eigen::VectorXd();
    return sol;
  }

  Simplex simplex(problem, options);

  Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(n + m);
  phase1.tail(m).setConstant(-1.0);
  simplex.run(phase1);
  simplex.refactor();
  sol.infeasibility = simplex.artificial_sum();
  sol.iterations = simplex.iterations();
  if (sol.infeasibility > options.feasibility_tol) {
    sol.status = LpStatus::Infeasible;
    sol.x = problem.lower + simplex.structural();
    return sol;
  }

  if (!options.objective_only_feasibility) {
    simplex.expel_artificials();
    simplex.fix_artificials();
    Eigen::VectorXd phase2 = Eigen::VectorXd::Zero(n + m);
    phase2.head(n) = problem.objective;
    const bool bounded = simplex.run(phase2);
    sol.iterations = simplex.iterations();
    if (!bounded) {
      sol.status = LpStatus::Unbounded;
      return sol;
    }
    simplex.refactor();
  }

  sol.status = LpStatus::Optimal;
  sol.x = problem.lower + simplex.structural();
  // Clamp roundoff-level bound violations of nonbasic-adjacent values.
  for (Eigen::Index j = 0; j < n; ++j) {
    sol.x[j] = std::clamp(sol.x[j], problem.lower[j], problem.upper[j]);
  }
  sol.objective = problem.objective.dot(sol.x);
  sol.duals = simplex.duals();
  return sol;
}

}  // namespace modquad
