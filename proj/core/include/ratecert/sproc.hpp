#pragma once

#include <array>
#include <optional>

#include <Eigen/Core>

namespace ratecert {

struct MultiplierResult {
  bool found = false;
  double lambda = 0.0;
  /// When no multiplier exists and the hypothesis set has nonzero points, a
  /// witness x with x'Sx <= 0 and x'Qx > 0 found by sampling the unit circle.
  std::optional<Eigen::Vector2d> witness;
  bool degenerate_hypothesis = false;  ///< only x = 0 satisfies x'Sx <= 0
};

/// Seeks lambda >= 0 with S - lambda Q >= 0 (2x2 forms). By losslessness,
/// absence of a multiplier means "x'Sx <= 0 implies x'Qx <= 0" fails for some
/// x, unless the hypothesis set is degenerate. The feasibility decision goes
/// through the semidefinite core; the multiplier itself is polished by 1-D
/// concave maximization of the minimum eigenvalue.
/// Throws std::invalid_argument for non-symmetric input.
MultiplierResult find_multiplier(const Eigen::Matrix2d& S, const Eigen::Matrix2d& Q);

/// One algebraic decomposition S_C = coeff * conclusion + weight * residual^2,
/// with the residual a linear form over (y, u).
struct SectorIdentity {
  double coeff = 0.0;
  double weight = 0.0;
  Eigen::Matrix2d conclusion;       // quadratic form of the implied inequality
  Eigen::RowVector2d residual_form; // residual = residual_form . (y, u)
};

/// The four decompositions of the sector form over (y, u):
///   [0] coeff (L-m)/(2m), conclusion m^2 y^2 - u^2, residual my - u
///   [1] coeff (L-m)/(2L), conclusion u^2 - L^2 y^2, residual u - Ly
///   [2] coeff (L-m),      conclusion m y^2 - u y,   residual my - u
///   [3] coeff (L-m),      conclusion u y - L y^2,   residual u - Ly
/// Requires 0 < m < L < inf (the first identity needs m > 0).
std::array<SectorIdentity, 4> sector_identities(double m, double L);

}  // namespace ratecert
