#pragma once

#include <vector>

#include <Eigen/Core>

#include "ratecert/lifted.hpp"
#include "ratecert/model.hpp"

namespace ratecert {

/// Point index inside the analysis window; kStar denotes the fixed point.
inline constexpr int kStar = -1;

/// A quadratic supply rate over the lifted basis. The inequality reads
///   x' Q x  <=  sum_i fcoef[i] * (f^{k+i} - f*)
/// along signals generated by any member of the oracle class. fcoef is zero
/// for Sector and SlopeRestricted kinds.
struct SupplyRate {
  Eigen::MatrixXd Q;       // dim x dim, symmetric
  Eigen::VectorXd fcoef;   // length r+1
  int oracle_index = 0;
  int point_a = kStar;
  int point_b = kStar;
};

/// Builds the supply rate coupling (point_a, point_b) for one oracle.
/// Sector requires point_b = kStar; SmoothStronglyConvex requires finite L;
/// point_a != point_b; iterate indices must lie inside the window.
SupplyRate supply_rate(const OracleClass& cls, const LiftedBasis& basis, int oracle_index,
                       int point_a, int point_b);

/// All supply rates for the given classes, in deterministic order: oracles
/// ascending; per oracle, Sector pairs each iterate with star (r+1 rates),
/// SlopeRestricted takes unordered pairs over {k..k+r, star} in lexicographic
/// order with star last, SmoothStronglyConvex takes ordered pairs in the same
/// lexicographic order.
std::vector<SupplyRate> enumerate_supply_rates(const std::vector<OracleClass>& classes,
                                               const LiftedBasis& basis);

}  // namespace ratecert
