#include "ratecert/supply.hpp"

#include <stdexcept>

namespace ratecert {

namespace {

// Symmetric matrix of the quadratic (a.x)(b.x).
Eigen::MatrixXd sym_outer(const Eigen::RowVectorXd& a, const Eigen::RowVectorXd& b) {
  return 0.5 * (a.transpose() * b + b.transpose() * a);
}

void check_point(int pt, int r) {
  if (pt == kStar) return;
  if (pt < 0 || pt > r) throw std::invalid_argument("supply_rate: index out of window");
}

}  // namespace

SupplyRate supply_rate(const OracleClass& cls, const LiftedBasis& basis, int oracle_index,
                       int point_a, int point_b) {
  cls.validate();
  if (oracle_index < 0 || oracle_index >= basis.p)
    throw std::invalid_argument("supply_rate: oracle index out of range");
  if (point_a == point_b) throw std::invalid_argument("supply_rate: point_a == point_b");
  check_point(point_a, basis.r);
  check_point(point_b, basis.r);
  if (cls.kind == OracleKind::Sector && point_b != kStar)
    throw std::invalid_argument("supply_rate: Sector requires point_b = star");
  if (cls.kind == OracleKind::SmoothStronglyConvex && !cls.finite_upper())
    throw std::invalid_argument("supply_rate: SmoothStronglyConvex requires finite L");

  // Star rows are zero in deviation coordinates.
  const Eigen::RowVectorXd zero = Eigen::RowVectorXd::Zero(basis.dim);
  auto yrow = [&](int pt) { return pt == kStar ? zero : basis.y_row(oracle_index, pt); };
  auto urow = [&](int pt) { return pt == kStar ? zero : basis.u_row(oracle_index, pt); };

  const Eigen::RowVectorXd dy = yrow(point_b) - yrow(point_a);
  const Eigen::RowVectorXd du = urow(point_b) - urow(point_a);

  const Eigen::Matrix2d Pi = cls.class_matrix();
  Eigen::MatrixXd Q = Pi(0, 0) * sym_outer(dy, dy) + 2.0 * Pi(0, 1) * sym_outer(dy, du) +
                      Pi(1, 1) * sym_outer(du, du);

  SupplyRate rate;
  rate.oracle_index = oracle_index;
  rate.point_a = point_a;
  rate.point_b = point_b;
  rate.fcoef = Eigen::VectorXd::Zero(basis.r + 1);

  if (cls.kind == OracleKind::SmoothStronglyConvex) {
    // Full-strength form: the class-matrix part is scaled by 1/(2(L-m)) and a
    // cross term (u_a+u_b).(y_b-y_a)/2 is added; the bound is f_b - f_a.
    Q *= 1.0 / (2.0 * (cls.L - cls.m));
    const Eigen::RowVectorXd us = urow(point_a) + urow(point_b);
    Q += 0.5 * sym_outer(us, dy);
    if (point_b != kStar) rate.fcoef(point_b) += 1.0;
    if (point_a != kStar) rate.fcoef(point_a) -= 1.0;
  }

  rate.Q = std::move(Q);
  return rate;
}

std::vector<SupplyRate> enumerate_supply_rates(const std::vector<OracleClass>& classes,
                                               const LiftedBasis& basis) {
  if (static_cast<int>(classes.size()) != basis.p)
    throw std::invalid_argument("enumerate_supply_rates: class count mismatch");

  // Window point list, iterate indices ascending, star last.
  std::vector<int> pts;
  for (int i = 0; i <= basis.r; ++i) pts.push_back(i);
  pts.push_back(kStar);

  std::vector<SupplyRate> rates;
  for (int j = 0; j < basis.p; ++j) {
    const auto& cls = classes[j];
    switch (cls.kind) {
      case OracleKind::Sector:
        for (int i = 0; i <= basis.r; ++i) rates.push_back(supply_rate(cls, basis, j, i, kStar));
        break;
      case OracleKind::SlopeRestricted:
        for (size_t a = 0; a < pts.size(); ++a)
          for (size_t b = a + 1; b < pts.size(); ++b)
            rates.push_back(supply_rate(cls, basis, j, pts[a], pts[b]));
        break;
      case OracleKind::SmoothStronglyConvex:
        for (size_t a = 0; a < pts.size(); ++a)
          for (size_t b = 0; b < pts.size(); ++b) {
            if (a == b) continue;
            rates.push_back(supply_rate(cls, basis, j, pts[a], pts[b]));
          }
        break;
    }
  }
  return rates;
}

}  // namespace ratecert
