#include "ratecert/model.hpp"

#include <cmath>
#include <stdexcept>

namespace ratecert {

Eigen::Matrix2d OracleClass::class_matrix() const {
  Eigen::Matrix2d M;
  if (finite_upper()) {
    M << m * L, -(L + m) / 2.0, -(L + m) / 2.0, 1.0;
  } else {
    // divide the finite-L matrix by L and take the limit
    M << 0.0, -0.5, -0.5, 0.0;
  }
  return M;
}

void OracleClass::validate() const {
  if (std::isnan(m) || std::isnan(L)) throw std::invalid_argument("oracle class: NaN bound");
  if (m < 0.0) throw std::invalid_argument("oracle class: m must be nonnegative");
  if (!(m < L)) throw std::invalid_argument("oracle class: requires m < L");
  if (kind == OracleKind::SmoothStronglyConvex && !finite_upper())
    throw std::invalid_argument("oracle class: SmoothStronglyConvex requires finite L");
}

AlgorithmSpec AlgorithmSpec::gradient_descent(double eta) {
  AlgorithmSpec s;
  s.family = AlgorithmFamily::GradientDescent;
  s.eta = eta;
  return s;
}

AlgorithmSpec AlgorithmSpec::projected_gradient(double eta) {
  AlgorithmSpec s;
  s.family = AlgorithmFamily::ProjectedGradient;
  s.eta = eta;
  return s;
}

AlgorithmSpec AlgorithmSpec::nesterov(double eta, double beta) {
  AlgorithmSpec s;
  s.family = AlgorithmFamily::Nesterov;
  s.eta = eta;
  s.beta = beta;
  return s;
}

AlgorithmSpec AlgorithmSpec::admm_gradient_form(double eta) {
  AlgorithmSpec s;
  s.family = AlgorithmFamily::AdmmGradientForm;
  s.eta = eta;
  return s;
}

AlgorithmSpec AlgorithmSpec::admm_prox_form(double eta) {
  AlgorithmSpec s;
  s.family = AlgorithmFamily::AdmmProxForm;
  s.eta = eta;
  return s;
}

AlgorithmSpec AlgorithmSpec::custom(Eigen::MatrixXd A, Eigen::MatrixXd B, Eigen::MatrixXd C,
                                    Eigen::MatrixXd D) {
  AlgorithmSpec s;
  s.family = AlgorithmFamily::Custom;
  s.eta = 1.0;  // unused
  s.custom_A = std::move(A);
  s.custom_B = std::move(B);
  s.custom_C = std::move(C);
  s.custom_D = std::move(D);
  return s;
}

AlgorithmSpec AlgorithmSpec::nesterov_default_tuning(double m, double L) {
  if (!(0.0 <= m && m < L) || !std::isfinite(L))
    throw std::invalid_argument("nesterov_default_tuning: requires 0 <= m < L < inf");
  const double sl = std::sqrt(L), sm = std::sqrt(m);
  return nesterov(1.0 / L, (sl - sm) / (sl + sm));
}

AlgorithmModel AlgorithmModel::with_oracles(std::vector<OracleClass> classes) const {
  AlgorithmModel out = *this;
  out.oracle_classes = std::move(classes);
  return out;
}

namespace {

AlgorithmModel make_model(int n, int p) {
  AlgorithmModel m;
  m.n = n;
  m.p = p;
  m.A = Eigen::MatrixXd::Zero(n, n);
  m.B = Eigen::MatrixXd::Zero(n, p);
  m.C = Eigen::MatrixXd::Zero(p, n);
  m.D = Eigen::MatrixXd::Zero(p, p);
  return m;
}

}  // namespace

AlgorithmModel build_algorithm(const AlgorithmSpec& spec) {
  if (spec.family != AlgorithmFamily::Custom) {
    if (!(spec.eta > 0.0) && spec.family != AlgorithmFamily::GradientDescent)
      throw std::invalid_argument("build_algorithm: eta must be positive");
    if (spec.family == AlgorithmFamily::GradientDescent && spec.eta < 0.0)
      throw std::invalid_argument("build_algorithm: eta must be nonnegative");
  }
  if (spec.beta.has_value() && spec.family != AlgorithmFamily::Nesterov)
    throw std::invalid_argument("build_algorithm: beta is only meaningful for Nesterov");

  const double eta = spec.eta;
  switch (spec.family) {
    case AlgorithmFamily::GradientDescent: {
      auto m = make_model(1, 1);
      m.A << 1.0;
      m.B << -eta;
      m.C << 1.0;
      return m;
    }
    case AlgorithmFamily::ProjectedGradient: {
      // x+ = u2,  y1 = x (gradient input),  y2 = x - eta*u1 (projection input)
      auto m = make_model(1, 2);
      m.A << 0.0;
      m.B << 0.0, 1.0;
      m.C << 1.0, 1.0;
      m.D << 0.0, 0.0, -eta, 0.0;
      return m;
    }
    case AlgorithmFamily::Nesterov: {
      if (!spec.beta) throw std::invalid_argument("build_algorithm: Nesterov requires beta");
      const double beta = *spec.beta;
      auto m = make_model(2, 1);
      m.A << 1.0 + beta, -beta, 1.0, 0.0;
      m.B << -eta, 0.0;
      m.C << 1.0 + beta, -beta;
      return m;
    }
    case AlgorithmFamily::AdmmGradientForm: {
      // States (z, w); u1 = grad f(y1), u2 in dg(y2). Implicit loop in y1.
      auto m = make_model(2, 2);
      m.A << 1.0, 0.0, 0.0, 0.0;
      m.B << -eta, -eta, 0.0, eta;
      m.C << 1.0, -1.0, 1.0, 0.0;
      m.D << -eta, 0.0, -eta, -eta;
      return m;
    }
    case AlgorithmFamily::AdmmProxForm: {
      // States (z, w); u1 = prox_{eta f}(z - w), u2 = prox_{eta g}(u1 + w).
      auto m = make_model(2, 2);
      m.A << 0.0, 0.0, 0.0, 1.0;
      m.B << 0.0, 1.0, 1.0, -1.0;
      m.C << 1.0, -1.0, 0.0, 1.0;
      m.D << 0.0, 0.0, 1.0, 0.0;
      return m;
    }
    case AlgorithmFamily::Custom: {
      const auto& A = spec.custom_A;
      const auto& B = spec.custom_B;
      const auto& C = spec.custom_C;
      const auto& D = spec.custom_D;
      const int n = static_cast<int>(A.rows());
      const int p = static_cast<int>(C.rows());
      if (A.cols() != n || B.rows() != n || B.cols() != p || C.cols() != n || D.rows() != p ||
          D.cols() != p)
        throw std::invalid_argument("build_algorithm: inconsistent custom dimensions");
      AlgorithmModel m;
      m.n = n;
      m.p = p;
      m.A = A;
      m.B = B;
      m.C = C;
      m.D = D;
      return m;
    }
  }
  throw std::invalid_argument("build_algorithm: unknown family");
}

ModelDiagnostics validate_model(const AlgorithmModel& model) {
  ModelDiagnostics diag;
  const int n = model.n, p = model.p;
  if (n <= 0 || p <= 0) diag.errors.push_back("nonpositive dimensions");
  auto check_dims = [&](const Eigen::MatrixXd& M, int r, int c, const char* name) {
    if (M.rows() != r || M.cols() != c)
      diag.errors.push_back(std::string(name) + ": dimension mismatch");
  };
  check_dims(model.A, n, n, "A");
  check_dims(model.B, n, p, "B");
  check_dims(model.C, p, n, "C");
  check_dims(model.D, p, p, "D");
  if (!diag.errors.empty()) return diag;

  if (!model.oracle_classes.empty()) {
    if (static_cast<int>(model.oracle_classes.size()) != p)
      diag.errors.push_back("oracle class count does not match p");
    for (size_t i = 0; i < model.oracle_classes.size(); ++i) {
      const auto& oc = model.oracle_classes[i];
      try {
        oc.validate();
      } catch (const std::invalid_argument& e) {
        diag.errors.push_back("oracle " + std::to_string(i + 1) + ": " + e.what());
      }
    }
  } else {
    diag.warnings.push_back("no oracle classes attached");
  }

  for (int j = 0; j < p; ++j) {
    if (model.B.col(j).isZero(0.0) && model.D.col(j).isZero(0.0))
      diag.warnings.push_back("oracle " + std::to_string(j + 1) + " unused");
  }
  return diag;
}

std::vector<OracleClass> default_oracle_classes(const AlgorithmSpec& spec, OracleKind f_kind,
                                                double m, double L) {
  OracleClass f_class{f_kind, m, L};
  f_class.validate();
  switch (spec.family) {
    case AlgorithmFamily::GradientDescent:
    case AlgorithmFamily::Nesterov:
      return {f_class};
    case AlgorithmFamily::ProjectedGradient:
      return {f_class, OracleClass::slope_restricted(0.0, 1.0)};
    case AlgorithmFamily::AdmmGradientForm:
      return {f_class, OracleClass{f_kind == OracleKind::Sector ? OracleKind::Sector
                                                                : OracleKind::SlopeRestricted,
                                   0.0, kInf}};
    case AlgorithmFamily::AdmmProxForm: {
      if (!std::isfinite(L))
        throw std::invalid_argument("default_oracle_classes: prox form requires finite L");
      // prox_{eta f} of an m-strongly convex, L-smooth f has chord slopes in
      // [1/(1+eta L), 1/(1+eta m)]; prox of a convex g is firmly nonexpansive.
      const double lo = 1.0 / (1.0 + spec.eta * L);
      const double hi = 1.0 / (1.0 + spec.eta * m);
      return {OracleClass::slope_restricted(lo, hi), OracleClass::slope_restricted(0.0, 1.0)};
    }
    case AlgorithmFamily::Custom:
      throw std::invalid_argument("default_oracle_classes: custom models supply their own");
  }
  throw std::invalid_argument("default_oracle_classes: unknown family");
}

}  // namespace ratecert
