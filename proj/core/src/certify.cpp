#include "ratecert/certify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

namespace ratecert {

namespace {

// Basis matrix of the vech(P) variable with index (a, b), a <= b.
Eigen::MatrixXd sym_basis(int np, int a, int b) {
  Eigen::MatrixXd E = Eigen::MatrixXd::Zero(np, np);
  E(a, b) += 1.0;
  E(b, a) += 1.0;
  if (a == b) E(a, a) = 1.0;
  return E;
}

void require_valid(const AlgorithmModel& model) {
  auto diag = validate_model(model);
  if (!diag.ok()) throw std::invalid_argument("certify: invalid model: " + diag.errors.front());
  if (model.oracle_classes.empty())
    throw std::invalid_argument("certify: model has no oracle classes attached");
}

}  // namespace

Eigen::VectorXd DissipationProgram::pack(const Eigen::MatrixXd& P, const Eigen::VectorXd& lambdas,
                                         const Eigen::VectorXd& mus) const {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(problem.dim);
  int k = 0;
  for (int a = 0; a < np; ++a)
    for (int b = a; b < np; ++b) x(k++) = P(a, b);
  for (int i = 0; i < lambdas.size(); ++i) x(k++) = lambdas(i);
  if (has_function_gap)
    for (int i = 0; i < mus.size(); ++i) x(k++) = mus(i);
  return x;
}

Eigen::MatrixXd DissipationProgram::unpack_P(const Eigen::VectorXd& x) const {
  Eigen::MatrixXd P(np, np);
  int k = 0;
  for (int a = 0; a < np; ++a)
    for (int b = a; b < np; ++b) {
      P(a, b) = x(k);
      P(b, a) = x(k);
      ++k;
    }
  return P;
}

Eigen::VectorXd DissipationProgram::unpack_lambdas(const Eigen::VectorXd& x) const {
  return x.segment(num_p_vars, rates.size());
}

Eigen::VectorXd DissipationProgram::unpack_mus(const Eigen::VectorXd& x) const {
  if (!has_function_gap) return Eigen::VectorXd::Zero(0);
  return x.segment(num_p_vars + rates.size(), rates.size());
}

DissipationProgram assemble_program(const AlgorithmModel& model, int r, double rho) {
  require_valid(model);
  if (rho < 0.0) throw std::invalid_argument("assemble_program: rho must be nonnegative");

  DissipationProgram prog;
  prog.rho_sq = rho * rho;
  prog.basis = lift(model, r);
  prog.rates = enumerate_supply_rates(model.oracle_classes, prog.basis);
  prog.has_function_gap =
      std::any_of(model.oracle_classes.begin(), model.oracle_classes.end(),
                  [](const OracleClass& c) { return c.kind == OracleKind::SmoothStronglyConvex; });
  if (prog.has_function_gap && r < 1)
    throw std::invalid_argument(
        "assemble_program: function-gap analysis needs a window of r >= 1");

  const int np = model.n * (r + 1);
  prog.np = np;
  prog.num_p_vars = np * (np + 1) / 2;
  const int nrates = static_cast<int>(prog.rates.size());
  const int dim = prog.num_p_vars + nrates + (prog.has_function_gap ? nrates : 0);

  const Eigen::MatrixXd Sc = prog.basis.state_stack(0, r + 1);
  const Eigen::MatrixXd Sn = prog.basis.state_stack(1, r + 1);
  const int bd = prog.basis.dim;

  auto& pb = prog.problem;
  pb.dim = dim;

  // Main block: -(V_next - rho^2 V_cur - sum lambda_i Q_i) >= 0.
  AffineMatrixMap main_map;
  main_map.constant = Eigen::MatrixXd::Zero(bd, bd);
  main_map.coeffs.assign(dim, Eigen::MatrixXd::Zero(bd, bd));
  {
    int k = 0;
    for (int a = 0; a < np; ++a)
      for (int b = a; b < np; ++b) {
        const Eigen::MatrixXd E = sym_basis(np, a, b);
        main_map.coeffs[k] =
            -(Sn.transpose() * E * Sn) + prog.rho_sq * (Sc.transpose() * E * Sc);
        ++k;
      }
    for (int i = 0; i < nrates; ++i) main_map.coeffs[prog.num_p_vars + i] = prog.rates[i].Q;
  }
  pb.psd.push_back(std::move(main_map));

  if (prog.has_function_gap) {
    // Positivity side: V_cur + sum mu_i Q_i >= 0 on the lifted basis.
    AffineMatrixMap pos_map;
    pos_map.constant = Eigen::MatrixXd::Zero(bd, bd);
    pos_map.coeffs.assign(dim, Eigen::MatrixXd::Zero(bd, bd));
    int k = 0;
    for (int a = 0; a < np; ++a)
      for (int b = a; b < np; ++b) {
        pos_map.coeffs[k] = Sc.transpose() * sym_basis(np, a, b) * Sc;
        ++k;
      }
    for (int i = 0; i < nrates; ++i)
      pos_map.coeffs[prog.num_p_vars + nrates + i] = prog.rates[i].Q;
    pb.psd.push_back(std::move(pos_map));

    // Function-gap coefficient matching for both multiplier sets.
    const int ngaps = r + 1;
    pb.eq_lhs = Eigen::MatrixXd::Zero(2 * ngaps, dim);
    pb.eq_rhs = Eigen::VectorXd::Zero(2 * ngaps);
    for (int j = 0; j < ngaps; ++j) {
      for (int i = 0; i < nrates; ++i) {
        pb.eq_lhs(j, prog.num_p_vars + i) = prog.rates[i].fcoef(j);
        pb.eq_lhs(ngaps + j, prog.num_p_vars + nrates + i) = prog.rates[i].fcoef(j);
      }
      pb.eq_rhs(j) = (j == 0) ? prog.rho_sq : (j == 1 ? -1.0 : 0.0);
      pb.eq_rhs(ngaps + j) = (j == 0) ? 1.0 : 0.0;
    }
    for (int i = 0; i < 2 * nrates; ++i) pb.nonneg.push_back(prog.num_p_vars + i);
  } else {
    // Normalization P >= I.
    AffineMatrixMap norm_map;
    norm_map.constant = -Eigen::MatrixXd::Identity(np, np);
    norm_map.coeffs.assign(dim, Eigen::MatrixXd::Zero(np, np));
    int k = 0;
    for (int a = 0; a < np; ++a)
      for (int b = a; b < np; ++b) {
        norm_map.coeffs[k] = sym_basis(np, a, b);
        ++k;
      }
    pb.psd.push_back(std::move(norm_map));
    for (int i = 0; i < nrates; ++i) pb.nonneg.push_back(prog.num_p_vars + i);
  }

  return prog;
}

std::pair<AlgorithmModel, double> rescale_model(const AlgorithmModel& model) {
  double Lref = 0.0;
  for (const auto& cls : model.oracle_classes)
    if (cls.finite_upper()) Lref = std::max(Lref, cls.L);
  if (!(Lref > 0.0) || Lref == 1.0) return {model, 1.0};

  AlgorithmModel scaled = model;
  scaled.B *= Lref;
  scaled.D *= Lref;
  for (auto& cls : scaled.oracle_classes) {
    cls.m /= Lref;
    if (cls.finite_upper()) cls.L /= Lref;
  }
  return {scaled, Lref};
}

CertificationResult certify_rate(const AlgorithmModel& model, int r, const CertifyOptions& opts) {
  require_valid(model);
  if (!(opts.tol > 0.0)) throw std::invalid_argument("certify_rate: tol must be positive");
  if (!(opts.rho_max > 0.0)) throw std::invalid_argument("certify_rate: rho_max must be positive");

  auto [scaled, scale] = opts.rescale ? rescale_model(model) : std::make_pair(model, 1.0);

  CertificationResult result;
  SolveResult best_solve;
  DissipationProgram best_prog;

  auto probe = [&](double rho) -> bool {
    auto prog = assemble_program(scaled, r, rho);
    auto sol = solve_feasibility(prog.problem, opts.margin);
    result.probes.push_back({rho, sol.status});
    if (sol.status == SolveStatus::Solution) {
      best_solve = std::move(sol);
      best_prog = std::move(prog);
      return true;
    }
    return false;
  };

  if (!probe(opts.rho_max)) return result;

  double lo = 0.0, hi = opts.rho_max;
  while (hi - lo > opts.tol &&
         static_cast<int>(result.probes.size()) < opts.max_probes) {
    const double mid = 0.5 * (lo + hi);
    if (probe(mid))
      hi = mid;
    else
      lo = mid;
  }

  // Monotone feasibility over the probed grid.
  double min_feasible = std::numeric_limits<double>::infinity();
  double max_infeasible = -std::numeric_limits<double>::infinity();
  for (const auto& p : result.probes) {
    if (p.status == SolveStatus::Solution)
      min_feasible = std::min(min_feasible, p.rho);
    else
      max_infeasible = std::max(max_infeasible, p.rho);
  }
  if (min_feasible < max_infeasible)
    throw std::runtime_error("certify_rate: probe history violates monotone feasibility");

  Certificate cert;
  cert.rho = hi;
  cert.P = best_prog.unpack_P(best_solve.point);
  cert.lambdas = best_prog.unpack_lambdas(best_solve.point);
  cert.mus = best_prog.unpack_mus(best_solve.point);
  cert.margins = best_solve.slacks;
  cert.window = r;
  cert.kind = best_prog.has_function_gap ? LyapunovKind::QuadraticPlusFunctionGap
                                         : LyapunovKind::Quadratic;
  cert.scale = scale;
  result.found = true;
  result.certificate = std::move(cert);
  return result;
}

std::optional<SublinearCertificate> certify_sublinear(const AlgorithmModel& model, double margin) {
  require_valid(model);
  if (model.n != 1 || model.p != 1)
    throw std::invalid_argument("certify_sublinear: requires a gradient-descent-shaped model");
  const auto& cls = model.oracle_classes.front();
  if (cls.kind != OracleKind::SmoothStronglyConvex)
    throw std::invalid_argument("certify_sublinear: oracle must be SmoothStronglyConvex");
  if (cls.m > 0.0)
    throw std::invalid_argument("certify_sublinear: m > 0, use geometric certification");
  if (!cls.finite_upper()) throw std::invalid_argument("certify_sublinear: L must be finite");

  auto [scaled, scale] = rescale_model(model);
  const auto basis = lift(scaled, 0);
  const auto rates = enumerate_supply_rates(scaled.oracle_classes, basis);
  const int nrates = static_cast<int>(rates.size());  // two: (k,star) and (star,k)
  const int dim = 1 + nrates;

  FeasibilityProblem pb;
  pb.dim = dim;

  // -(V(x+) - V(x) - sum lambda_i Q_i) >= 0 over (x, u).
  AffineMatrixMap main_map;
  main_map.constant = Eigen::MatrixXd::Zero(basis.dim, basis.dim);
  main_map.coeffs.assign(dim, Eigen::MatrixXd::Zero(basis.dim, basis.dim));
  const Eigen::MatrixXd S0 = basis.xi[0], S1 = basis.xi[1];
  main_map.coeffs[0] = -(S1.transpose() * S1) + S0.transpose() * S0;
  for (int i = 0; i < nrates; ++i) main_map.coeffs[1 + i] = rates[i].Q;
  pb.psd.push_back(std::move(main_map));

  // Positivity of the storage coefficient.
  AffineMatrixMap pos_map;
  pos_map.constant = Eigen::MatrixXd::Zero(1, 1);
  pos_map.coeffs.assign(dim, Eigen::MatrixXd::Zero(1, 1));
  pos_map.coeffs[0](0, 0) = 1.0;
  pb.psd.push_back(std::move(pos_map));

  // sum lambda_i fcoef_i = -1 on the f^k gap.
  pb.eq_lhs = Eigen::MatrixXd::Zero(1, dim);
  pb.eq_rhs = Eigen::VectorXd::Zero(1);
  for (int i = 0; i < nrates; ++i) pb.eq_lhs(0, 1 + i) = rates[i].fcoef(0);
  pb.eq_rhs(0) = -1.0;
  for (int i = 0; i < nrates; ++i) pb.nonneg.push_back(1 + i);

  auto sol = solve_feasibility(pb, margin);
  if (sol.status != SolveStatus::Solution) return std::nullopt;

  SublinearCertificate cert;
  cert.P = sol.point(0);
  cert.lambdas = sol.point.segment(1, nrates);
  cert.margins = sol.slacks;
  cert.scale = scale;
  return cert;
}

bool VerificationReport::ok(double slack_tol) const {
  if (!failures.empty()) return false;
  for (double s : lmi_slacks)
    if (s < -slack_tol) return false;
  return max_sample_violation <= slack_tol;
}

VerificationReport verify_certificate(const AlgorithmModel& model, const Certificate& cert,
                                      int sample_count) {
  VerificationReport report;
  auto [scaled, scale] = cert.scale != 1.0 ? rescale_model(model) : std::make_pair(model, 1.0);
  if (std::abs(scale - cert.scale) > 1e-12 * std::max(1.0, cert.scale))
    report.failures.push_back("certificate scale does not match the model rescale");

  auto prog = assemble_program(scaled, cert.window, cert.rho);
  if (cert.P.rows() != prog.np ||
      cert.lambdas.size() != static_cast<Eigen::Index>(prog.rates.size())) {
    report.failures.push_back("certificate shape does not match the assembled program");
    return report;
  }
  const Eigen::VectorXd x = prog.pack(cert.P, cert.lambdas, cert.mus);

  for (const auto& map : prog.problem.psd) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(map.eval(x), Eigen::EigenvaluesOnly);
    report.lmi_slacks.push_back(eig.eigenvalues().minCoeff());
  }
  for (double lam : cert.lambdas)
    if (lam < -1e-12) report.failures.push_back("negative lambda multiplier");
  for (double mu : cert.mus)
    if (mu < -1e-12) report.failures.push_back("negative mu multiplier");
  if (prog.problem.eq_lhs.rows() > 0) {
    const double res = (prog.problem.eq_lhs * x - prog.problem.eq_rhs).cwiseAbs().maxCoeff();
    if (res > 1e-9 * (1.0 + prog.problem.eq_rhs.cwiseAbs().maxCoeff()))
      report.failures.push_back("function-gap equalities violated");
  }

  // Random basis-vector samples of the scalar dissipation inequality.
  std::mt19937 rng(12345);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const Eigen::MatrixXd main_value = prog.problem.psd[0].eval(x);
  double worst = 0.0;
  for (int s = 0; s < sample_count; ++s) {
    Eigen::VectorXd v(prog.basis.dim);
    for (int i = 0; i < v.size(); ++i) v(i) = gauss(rng);
    v.normalize();
    worst = std::max(worst, -v.dot(main_value * v));
  }
  report.max_sample_violation = worst;
  return report;
}

}  // namespace ratecert
