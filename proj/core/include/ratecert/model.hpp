#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace ratecert {

/// Oracle families, ordered from weakest to strongest assumption.
enum class OracleKind {
  Sector,               ///< pointwise conic bound about the shifted origin
  SlopeRestricted,      ///< every chord has slope in [m, L]
  SmoothStronglyConvex  ///< gradient of an m-strongly convex, L-smooth function
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// An oracle class: a kind plus slope bounds m < L, where L may be +inf.
/// The upper bound is stored as an extended real, never as a large float.
struct OracleClass {
  OracleKind kind = OracleKind::Sector;
  double m = 0.0;
  double L = kInf;

  static OracleClass sector(double m, double L) { return {OracleKind::Sector, m, L}; }
  static OracleClass slope_restricted(double m, double L) {
    return {OracleKind::SlopeRestricted, m, L};
  }
  static OracleClass smooth_strongly_convex(double m, double L) {
    return {OracleKind::SmoothStronglyConvex, m, L};
  }

  bool finite_upper() const { return std::isfinite(L); }

  /// [[mL, -(L+m)/2], [-(L+m)/2, 1]] for finite L; the normalized limit
  /// [[0, -1/2], [-1/2, 0]] when L = +inf.
  Eigen::Matrix2d class_matrix() const;

  /// Throws std::invalid_argument on violated invariants (m >= L, m < 0,
  /// SmoothStronglyConvex with infinite L).
  void validate() const;
};

enum class AlgorithmFamily {
  GradientDescent,
  ProjectedGradient,
  Nesterov,
  AdmmGradientForm,
  AdmmProxForm,
  Custom
};

/// Parameters identifying a concrete algorithm instance.
struct AlgorithmSpec {
  AlgorithmFamily family = AlgorithmFamily::GradientDescent;
  double eta = 0.0;
  std::optional<double> beta;  // Nesterov only

  // Custom family supplies all matrices explicitly.
  Eigen::MatrixXd custom_A, custom_B, custom_C, custom_D;

  static AlgorithmSpec gradient_descent(double eta);
  static AlgorithmSpec projected_gradient(double eta);
  static AlgorithmSpec nesterov(double eta, double beta);
  static AlgorithmSpec admm_gradient_form(double eta);
  static AlgorithmSpec admm_prox_form(double eta);
  static AlgorithmSpec custom(Eigen::MatrixXd A, Eigen::MatrixXd B, Eigen::MatrixXd C,
                              Eigen::MatrixXd D);

  /// Default tuning of Nesterov's method: eta = 1/L, beta = (sqrt(L)-sqrt(m))/(sqrt(L)+sqrt(m)).
  static AlgorithmSpec nesterov_default_tuning(double m, double L);
};

/// Dimension-free state-space model of one algorithm in feedback with its
/// oracles. All signals are deviations from the fixed point, and the model is
/// interpreted per scalar coordinate (the analysis decouples over the problem
/// dimension). D may be nonzero and may encode implicit loops.
struct AlgorithmModel {
  int n = 0;  ///< per-coordinate states
  int p = 0;  ///< oracles
  Eigen::MatrixXd A;  // n x n
  Eigen::MatrixXd B;  // n x p
  Eigen::MatrixXd C;  // p x n
  Eigen::MatrixXd D;  // p x p
  std::vector<OracleClass> oracle_classes;  // caller-supplied, size p when set

  AlgorithmModel with_oracles(std::vector<OracleClass> classes) const;
};

/// Builds the per-coordinate model for a family. Oracle classes are not baked
/// in; attach them with AlgorithmModel::with_oracles.
/// Throws std::invalid_argument on nonpositive eta, missing beta, or
/// inconsistent custom dimensions.
AlgorithmModel build_algorithm(const AlgorithmSpec& spec);

struct ModelDiagnostics {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  bool ok() const { return errors.empty(); }
};

/// Pure structural report: dimension mismatches, oracle-class violations, and
/// oracles whose output never enters a state update.
ModelDiagnostics validate_model(const AlgorithmModel& model);

/// Standard oracle wiring for the built-in families, given the f-side class.
/// ProjectedGradient appends the projection as SlopeRestricted(0, 1); the
/// ADMM gradient form appends the subgradient as Sector(0, inf); the ADMM
/// prox form maps (m, L, eta) to the proximal slope bounds
/// (1/(1+eta*L), 1/(1+eta*m)) and appends SlopeRestricted(0, 1) for the
/// g-side prox.
std::vector<OracleClass> default_oracle_classes(const AlgorithmSpec& spec,
                                                OracleKind f_kind, double m, double L);

}  // namespace ratecert
