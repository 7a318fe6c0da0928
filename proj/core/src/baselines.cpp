#include "ratecert/baselines.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ratecert {

namespace {

void check_ml(double m, double L) {
  if (!(0.0 <= m && m < L) || !std::isfinite(L))
    throw std::invalid_argument("analytic_rate: requires 0 <= m < L < inf");
}

// Schur-complement objective: rho^2 as a function of the multiplier.
double gd_schur_objective(double lambda, double m, double L, double eta) {
  const double t = eta - lambda * (L + m) / 2.0;
  return 1.0 - lambda * m * L + t * t / (lambda - eta * eta);
}

// Minimize the convex 1-D Schur objective over lambda > eta^2 by golden
// section, after bracketing the minimizer.
double gd_sdp_closed_form(double m, double L, double eta) {
  if (eta == 0.0) return 1.0;
  const double eps = 1e-12 * (1.0 + eta * eta);
  double lo = eta * eta + eps;
  double hi = eta * eta + 1.0;
  while (gd_schur_objective(hi * 2.0, m, L, eta) < gd_schur_objective(hi, m, L, eta))
    hi *= 2.0;
  hi *= 2.0;

  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double fc = gd_schur_objective(c, m, L, eta), fd = gd_schur_objective(d, m, L, eta);
  for (int it = 0; it < 200 && b - a > 1e-15 * (1.0 + b); ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = gd_schur_objective(c, m, L, eta);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = gd_schur_objective(d, m, L, eta);
    }
  }
  const double rho_sq = std::min(fc, fd);
  return std::sqrt(std::max(0.0, rho_sq));
}

}  // namespace

double analytic_rate(BoundKind kind, double m, double L, double eta) {
  check_ml(m, L);
  switch (kind) {
    case BoundKind::NesterovGdAnalysis: {
      if (eta < 0.0 || eta > 2.0 / (L + m))
        throw std::invalid_argument("analytic_rate: eta outside [0, 2/(L+m)]");
      return std::sqrt(1.0 - 2.0 * eta * m * L / (L + m));
    }
    case BoundKind::PolyakGd:
      return std::max(std::abs(1.0 - eta * m), std::abs(1.0 - eta * L));
    case BoundKind::GdSdpClosedForm: {
      // Rescale to L = 1; the rate is invariant.
      return gd_sdp_closed_form(m / L, 1.0, eta * L);
    }
    case BoundKind::EstimateSequence:
      return std::sqrt(1.0 - std::sqrt(m / L));
    case BoundKind::AdmmDengUpper: {
      const double a = eta * eta * L * m;
      return std::sqrt((a + 1.0) / (a + 2.0 * eta * m + 1.0));
    }
    case BoundKind::AdmmQuadraticLower:
      return std::max(1.0 / (1.0 + eta * m), eta * L / (1.0 + eta * L));
  }
  throw std::invalid_argument("analytic_rate: unknown kind");
}

AdmmOptimalPoint admm_optimal_point(double m, double L) {
  if (!(0.0 < m && m < L) || !std::isfinite(L))
    throw std::invalid_argument("admm_optimal_point: requires 0 < m < L < inf");
  AdmmOptimalPoint pt;
  const double sl = std::sqrt(L), sm = std::sqrt(m);
  pt.eta = 1.0 / std::sqrt(L * m);
  pt.rho = sl / (sl + sm);
  pt.lambda1 = 1.0;
  pt.lambda2 = (L - m) * (L - m) / L;
  const double c = sm * (sl + sm) * (L - m) / 2.0;
  const double q = std::sqrt(m / L);
  pt.P << c, c * q, c * q, c;
  return pt;
}

double iteration_complexity(double rho) {
  if (!(rho > 0.0)) throw std::invalid_argument("iteration_complexity: rho must be positive");
  if (rho >= 1.0) return std::numeric_limits<double>::infinity();
  return -1.0 / std::log(rho);
}

}  // namespace ratecert
