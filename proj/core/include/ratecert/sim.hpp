#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "ratecert/certify.hpp"
#include "ratecert/model.hpp"

namespace ratecert {

enum class TestFunctionId { F1, F2 };

/// The two 2-D test functions:
///   F1(x) = (m/2)(x1^2+x2^2) + (L-m) log(e^{-x1} + e^{x1/3+x2} + e^{x1/3-x2})
///   F2(x) = (L/2) x1^2 + (m/2) x2^2
/// Both have Hessian eigenvalues in [m, L].
struct TestFunction {
  TestFunctionId id = TestFunctionId::F2;
  double m = 0.0;
  double L = 1.0;

  double value(const Eigen::Vector2d& x) const;
  Eigen::Vector2d gradient(const Eigen::Vector2d& x) const;
  Eigen::Matrix2d hessian(const Eigen::Vector2d& x) const;

  /// Minimizer: the origin for F2; for F1 a cached high-accuracy pre-solve
  /// (gradient descent with eta = 1/L until the gradient norm is <= 1e-12).
  Eigen::Vector2d minimizer() const;
  double min_value() const { return value(minimizer()); }
};

struct Trajectory {
  std::vector<Eigen::Vector2d> x;       ///< iterates x^0..x^N
  std::vector<Eigen::Vector2d> y;       ///< oracle query points (equals x for GD)
  std::vector<double> dist_sq;          ///< ||x^k - x*||^2
  std::vector<double> gap;              ///< f(x^k) - f*
  std::vector<double> gap_at_y;         ///< f(y^k) - f*
  std::vector<double> grad_norm;
  Eigen::Vector2d x_star;
  double f_star = 0.0;
};

/// Iterates the concrete update equations (never the deviation model) for
/// GradientDescent or Nesterov on a test function. Reports divergence
/// (norm > 1e12) with the step index via std::runtime_error. N >= 1.
Trajectory run_trajectory(const TestFunction& fn, const AlgorithmSpec& spec,
                          const Eigen::Vector2d& x0, int steps);

struct LyapunovTrace {
  std::vector<double> value;  ///< Lyapunov value per step
  std::vector<double> ratio;  ///< value(k+1)/value(k) where numerically valid
  double max_ratio = 0.0;
  bool monotone_within = true;  ///< all ratios <= rho^2 + 1e-9
  int valid_length = 0;         ///< entries above the floating-point floor
};

/// Evaluates V (Kronecker-expanded per coordinate) plus the function gap
/// along a trajectory. Ratios are reported only while the Lyapunov value
/// stays above a relative floor of 1e-8 * value(0); below that the values
/// are dominated by floating-point cancellation.
/// Throws std::invalid_argument when the window extends past the end.
LyapunovTrace lyapunov_trace(const Trajectory& traj, const TestFunction& fn,
                             const AlgorithmSpec& spec, const Certificate& cert);

/// Scalar oracles for the concrete per-family steppers used in tests.
using ScalarOracle = std::function<double(double)>;

/// Runs the concrete scalar update equations for one family and returns the
/// state sequence xi^0..xi^N (per-coordinate state vector as in the model).
/// AdmmGradientForm requires linear oracles and is driven by their slopes.
std::vector<Eigen::VectorXd> concrete_states(const AlgorithmSpec& spec,
                                             const std::vector<ScalarOracle>& oracles,
                                             const Eigen::VectorXd& xi0, int steps);

/// Iterates the deviation model with linear oracles u_i = a_i y_i, resolving
/// any implicit loop through D. Used as the brute-force cross-check.
std::vector<Eigen::VectorXd> model_states_linear(const AlgorithmModel& model,
                                                 const Eigen::VectorXd& slopes,
                                                 const Eigen::VectorXd& xi0, int steps);

}  // namespace ratecert
