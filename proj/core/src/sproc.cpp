#include "ratecert/sproc.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "ratecert/sdp.hpp"

namespace ratecert {

namespace {

double min_eig(const Eigen::Matrix2d& M) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(M, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

// Maximize the concave function lambda -> min_eig(S - lambda Q) over
// lambda >= 0 by golden section after bracketing.
double polish_multiplier(const Eigen::Matrix2d& S, const Eigen::Matrix2d& Q, double seed) {
  auto f = [&](double lam) { return min_eig(S - lam * Q); };
  double lo = 0.0;
  double hi = std::max(1.0, 4.0 * seed);
  while (f(hi) > f(0.5 * hi) && hi < 1e12) hi *= 4.0;

  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 300 && b - a > 1e-14 * (1.0 + b); ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = f(d);
    }
  }
  return fc > fd ? c : d;
}

}  // namespace

MultiplierResult find_multiplier(const Eigen::Matrix2d& S, const Eigen::Matrix2d& Q) {
  if ((S - S.transpose()).cwiseAbs().maxCoeff() > 1e-12 ||
      (Q - Q.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("find_multiplier: inputs must be symmetric");

  // Losslessness needs a regularity condition: some x with x'Sx < 0. Without
  // it the hypothesis set is {0} and the implication is vacuous; report that
  // instead of asserting the equivalence.
  if (min_eig(S) >= -1e-12) {
    MultiplierResult degenerate;
    degenerate.degenerate_hypothesis = true;
    return degenerate;
  }

  FeasibilityProblem pb;
  pb.dim = 1;
  AffineMatrixMap map;
  map.constant = S;
  map.coeffs = {-Q};
  pb.psd.push_back(std::move(map));
  pb.nonneg.push_back(0);
  pb.radius = 1e8;

  MultiplierResult result;
  auto sol = solve_feasibility(pb, 1e-9);
  if (sol.status == SolveStatus::Solution) {
    result.found = true;
    result.lambda = std::max(0.0, polish_multiplier(S, Q, sol.point(0)));
    return result;
  }

  // No multiplier: search the unit circle for a violating x, or report a
  // degenerate hypothesis set ({x : x'Sx <= 0} = {0}).
  bool hypothesis_nonempty = false;
  double best_gap = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3600; ++i) {
    const double t = i * (M_PI / 3600.0);
    Eigen::Vector2d x(std::cos(t), std::sin(t));
    const double sx = x.dot(S * x);
    if (sx <= 1e-12) {
      hypothesis_nonempty = true;
      const double qx = x.dot(Q * x);
      if (qx > best_gap) {
        best_gap = qx;
        if (qx > 1e-12) result.witness = x;
      }
    }
  }
  result.degenerate_hypothesis = !hypothesis_nonempty;
  return result;
}

std::array<SectorIdentity, 4> sector_identities(double m, double L) {
  if (!(0.0 < m && m < L) || !std::isfinite(L))
    throw std::invalid_argument("sector_identities: requires 0 < m < L < inf");

  std::array<SectorIdentity, 4> out;
  const Eigen::RowVector2d res_m(m, -1.0);   // my - u
  const Eigen::RowVector2d res_L(-L, 1.0);   // u - Ly

  out[0].coeff = (L - m) / (2.0 * m);
  out[0].weight = (L + m) / (2.0 * m);
  out[0].conclusion << m * m, 0.0, 0.0, -1.0;
  out[0].residual_form = res_m;

  out[1].coeff = (L - m) / (2.0 * L);
  out[1].weight = (L + m) / (2.0 * L);
  out[1].conclusion << -L * L, 0.0, 0.0, 1.0;
  out[1].residual_form = res_L;

  out[2].coeff = L - m;
  out[2].weight = 1.0;
  out[2].conclusion << m, -0.5, -0.5, 0.0;
  out[2].residual_form = res_m;

  out[3].coeff = L - m;
  out[3].weight = 1.0;
  out[3].conclusion << -L, 0.5, 0.5, 0.0;
  out[3].residual_form = res_L;

  return out;
}

}  // namespace ratecert
