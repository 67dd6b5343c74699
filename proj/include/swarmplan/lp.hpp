#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <limits>
#include <string_view>

namespace swarmplan {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

/// min c'x  s.t.  A_eq x = b_eq,  A_in x <= b_in,  lower <= x <= upper.
/// Bounds may be +-infinity; the right-hand sides must be finite.
struct LinearProgram {
  Eigen::VectorXd objective;
  SparseMatrix eq_matrix;
  Eigen::VectorXd eq_rhs;
  SparseMatrix ineq_matrix;
  Eigen::VectorXd ineq_rhs;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  Eigen::Index num_vars() const { return objective.size(); }

  /// Free variables, no constraints.
  static LinearProgram with_vars(Eigen::Index n);

  /// Throws std::invalid_argument on inconsistent dimensions or non-finite rhs.
  void validate() const;
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit, NumericalError };

std::string_view to_string(LpStatus s);

struct LpSolution {
  LpStatus status = LpStatus::NumericalError;
  Eigen::VectorXd x;
  double objective = 0.0;
  Eigen::VectorXd eq_dual;    // multipliers of A_eq x = b_eq
  Eigen::VectorXd ineq_dual;  // multipliers of A_in x <= b_in (<= 0 at optimum)
  int iterations = 0;
  // Unscaled residuals of the returned point.
  double primal_residual = 0.0;  // max(|A_eq x - b|, (A_in x - b)+, bound excess)
  double dual_residual = 0.0;
  double gap = 0.0;  // |primal - dual objective| / (1 + |primal objective|)
};

struct LpOptions {
  double tolerance = 1e-9;
  int max_iterations = 200;
  int scaling_passes = 10;
};

/// Mehrotra predictor-corrector primal-dual interior-point method.
/// The Newton system is the regularized quasi-definite KKT matrix,
/// factored with a sparse LDL' and polished by iterative refinement.
LpSolution solve_lp(const LinearProgram& lp, const LpOptions& opts = {});

}  // namespace swarmplan
