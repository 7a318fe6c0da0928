#pragma once

#include <vector>

#include <Eigen/Core>

namespace ratecert {

/// Affine symmetric-matrix map F(x) = constant + sum_i x_i coeffs[i],
/// constrained F(x) >= 0 (positive semidefinite).
struct AffineMatrixMap {
  Eigen::MatrixXd constant;
  std::vector<Eigen::MatrixXd> coeffs;  // one per decision variable

  Eigen::MatrixXd eval(const Eigen::VectorXd& x) const;
};

/// Small dense semidefinite feasibility problem. Desk scale only: matrix
/// sizes <= 32, decision dimension <= 128.
struct FeasibilityProblem {
  int dim = 0;
  std::vector<AffineMatrixMap> psd;
  Eigen::MatrixXd eq_lhs;  // may be 0 x dim
  Eigen::VectorXd eq_rhs;
  std::vector<int> nonneg;
  double radius = 1e4;  ///< search ball radius around the origin
};

enum class SolveStatus { Solution, Infeasible, SolverFailure };

struct SolveResult {
  SolveStatus status = SolveStatus::SolverFailure;
  Eigen::VectorXd point;
  std::vector<double> slacks;  ///< min eigenvalue of each PSD map at the point
  int iterations = 0;
};

/// Solves the feasibility problem, aiming for the requested strict margin on
/// every PSD map. A Solution is only returned after an independent eigenvalue
/// re-check: every PSD map has min eigenvalue >= -1e-9, equalities hold to
/// 1e-9, and nonnegative variables are >= -1e-12. Infeasible means the
/// search-volume test triggered; SolverFailure signals neither proven.
/// Throws std::invalid_argument on dimension mismatch or NaN/Inf data.
SolveResult solve_feasibility(const FeasibilityProblem& problem, double margin);

}  // namespace ratecert
