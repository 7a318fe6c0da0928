#pragma once

#include <Eigen/Core>

namespace ratecert {

/// Closed-form worst-case bounds used as oracles for the certifier.
enum class BoundKind {
  NesterovGdAnalysis,  ///< sqrt(1 - 2 eta m L / (L+m)), for 0 <= eta <= 2/(L+m)
  PolyakGd,            ///< max(|1 - eta m|, |1 - eta L|)
  GdSdpClosedForm,     ///< Schur-complement route, extremized numerically over lambda
  EstimateSequence,    ///< sqrt(1 - sqrt(m/L)); eta ignored
  AdmmDengUpper,       ///< sqrt((eta^2 L m + 1)/(eta^2 L m + 2 eta m + 1))
  AdmmQuadraticLower   ///< max(1/(1+eta m), eta L/(1+eta L))
};

/// Evaluates the bound. Requires 0 <= m < L < inf; eta required except for
/// EstimateSequence. Throws std::invalid_argument out of domain.
double analytic_rate(BoundKind kind, double m, double L, double eta = 0.0);

struct AdmmOptimalPoint {
  double eta = 0.0;
  double rho = 0.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  Eigen::Matrix2d P;
};

/// Analytic optimum of the ADMM analysis at the fastest stepsize eta = 1/sqrt(Lm).
AdmmOptimalPoint admm_optimal_point(double m, double L);

/// -1/log(rho) for rho < 1; +inf for rho >= 1. Throws for rho <= 0.
double iteration_complexity(double rho);

}  // namespace ratecert
