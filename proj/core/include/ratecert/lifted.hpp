#pragma once

#include <vector>

#include <Eigen/Core>

#include "ratecert/model.hpp"

namespace ratecert {

/// Linear maps expressing the windowed signals of an algorithm over the lifted
/// basis (xi^k, u^k, ..., u^{k+r}), one scalar coordinate at a time.
///
/// Basis dimension is n + (r+1)p. Rows satisfy
///   xi^{k+i+1} = A xi^{k+i} + B u^{k+i},   y^{k+i} = C xi^{k+i} + D u^{k+i}.
struct LiftedBasis {
  int n = 0;
  int p = 0;
  int r = 0;
  int dim = 0;

  std::vector<Eigen::MatrixXd> xi;  ///< xi[i] (n x dim) for i = 0..r+1
  std::vector<Eigen::MatrixXd> y;   ///< y[i] (p x dim) for i = 0..r
  std::vector<Eigen::MatrixXd> u;   ///< selector u[i] (p x dim) for i = 0..r

  /// Row giving y_j^{k+i} over the basis.
  Eigen::RowVectorXd y_row(int oracle, int i) const { return y.at(i).row(oracle); }
  /// Row giving u_j^{k+i} over the basis.
  Eigen::RowVectorXd u_row(int oracle, int i) const { return u.at(i).row(oracle); }

  /// Stacked rows for (xi^{k+lo}, ..., xi^{k+lo+count-1}), (count*n) x dim.
  Eigen::MatrixXd state_stack(int lo, int count) const;
};

/// Unrolls the model over a window of r extra steps. r >= 0.
LiftedBasis lift(const AlgorithmModel& model, int r);

}  // namespace ratecert
