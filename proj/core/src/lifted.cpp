#include "ratecert/lifted.hpp"

#include <stdexcept>

namespace ratecert {

Eigen::MatrixXd LiftedBasis::state_stack(int lo, int count) const {
  Eigen::MatrixXd S(count * n, dim);
  for (int i = 0; i < count; ++i) S.middleRows(i * n, n) = xi.at(lo + i);
  return S;
}

LiftedBasis lift(const AlgorithmModel& model, int r) {
  if (r < 0) throw std::invalid_argument("lift: r must be nonnegative");
  auto diag = validate_model(model);
  if (!diag.ok()) throw std::invalid_argument("lift: invalid model: " + diag.errors.front());

  LiftedBasis b;
  b.n = model.n;
  b.p = model.p;
  b.r = r;
  b.dim = model.n + (r + 1) * model.p;

  b.u.resize(r + 1);
  for (int i = 0; i <= r; ++i) {
    b.u[i] = Eigen::MatrixXd::Zero(model.p, b.dim);
    b.u[i].middleCols(model.n + i * model.p, model.p).setIdentity();
  }

  b.xi.resize(r + 2);
  b.xi[0] = Eigen::MatrixXd::Zero(model.n, b.dim);
  b.xi[0].leftCols(model.n).setIdentity();
  for (int i = 0; i <= r; ++i) b.xi[i + 1] = model.A * b.xi[i] + model.B * b.u[i];

  b.y.resize(r + 1);
  for (int i = 0; i <= r; ++i) b.y[i] = model.C * b.xi[i] + model.D * b.u[i];

  return b;
}

}  // namespace ratecert
