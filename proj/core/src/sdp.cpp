#include "ratecert/sdp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

namespace ratecert {

namespace {

constexpr double kPsdTol = 1e-9;     // accepted floor for PSD min eigenvalues
constexpr double kNonnegTol = 1e-12; // accepted floor for nonnegative variables
constexpr double kEqTol = 1e-9;

struct ReducedMap {
  Eigen::MatrixXd constant;
  std::vector<Eigen::MatrixXd> coeffs;  // one per reduced variable

  Eigen::MatrixXd eval(const Eigen::VectorXd& z) const {
    Eigen::MatrixXd M = constant;
    for (size_t k = 0; k < coeffs.size(); ++k) M.noalias() += z(k) * coeffs[k];
    return M;
  }
};

void validate_problem(const FeasibilityProblem& pb) {
  if (pb.dim <= 0 || pb.dim > 128)
    throw std::invalid_argument("solve_feasibility: decision dimension out of range");
  for (const auto& map : pb.psd) {
    const auto sz = map.constant.rows();
    if (sz == 0 || sz > 32 || map.constant.cols() != sz)
      throw std::invalid_argument("solve_feasibility: PSD map size out of range");
    if (static_cast<int>(map.coeffs.size()) != pb.dim)
      throw std::invalid_argument("solve_feasibility: PSD map coefficient count mismatch");
    if (!map.constant.allFinite())
      throw std::invalid_argument("solve_feasibility: NaN/Inf in problem data");
    for (const auto& c : map.coeffs) {
      if (c.rows() != sz || c.cols() != sz)
        throw std::invalid_argument("solve_feasibility: PSD coefficient dimension mismatch");
      if (!c.allFinite()) throw std::invalid_argument("solve_feasibility: NaN/Inf in problem data");
    }
  }
  if (pb.eq_lhs.rows() > 0 && pb.eq_lhs.cols() != pb.dim)
    throw std::invalid_argument("solve_feasibility: equality dimension mismatch");
  if (pb.eq_lhs.rows() != pb.eq_rhs.size())
    throw std::invalid_argument("solve_feasibility: equality rhs mismatch");
  if ((pb.eq_lhs.rows() > 0 && !pb.eq_lhs.allFinite()) ||
      (pb.eq_rhs.size() > 0 && !pb.eq_rhs.allFinite()))
    throw std::invalid_argument("solve_feasibility: NaN/Inf in equality data");
  for (int idx : pb.nonneg)
    if (idx < 0 || idx >= pb.dim)
      throw std::invalid_argument("solve_feasibility: nonneg index out of range");
}

// Independent eigenvalue re-check at a full-space point.
bool recheck(const FeasibilityProblem& pb, const Eigen::VectorXd& x, std::vector<double>& slacks) {
  slacks.clear();
  bool ok = true;
  for (const auto& map : pb.psd) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(map.eval(x), Eigen::EigenvaluesOnly);
    const double s = eig.eigenvalues().minCoeff();
    slacks.push_back(s);
    if (s < -kPsdTol) ok = false;
  }
  for (int idx : pb.nonneg)
    if (x(idx) < -kNonnegTol) ok = false;
  if (pb.eq_lhs.rows() > 0) {
    const double res = (pb.eq_lhs * x - pb.eq_rhs).cwiseAbs().maxCoeff();
    if (res > kEqTol * (1.0 + pb.eq_rhs.cwiseAbs().maxCoeff())) ok = false;
  }
  return ok;
}

}  // namespace

Eigen::MatrixXd AffineMatrixMap::eval(const Eigen::VectorXd& x) const {
  Eigen::MatrixXd M = constant;
  for (size_t i = 0; i < coeffs.size(); ++i) M.noalias() += x(i) * coeffs[i];
  return M;
}

SolveResult solve_feasibility(const FeasibilityProblem& pb, double margin) {
  validate_problem(pb);
  if (!(margin > 0.0)) throw std::invalid_argument("solve_feasibility: margin must be positive");

  SolveResult out;

  // Eliminate equalities: x = x0 + N z with E x0 ~= e and E N = 0.
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(pb.dim);
  Eigen::MatrixXd N = Eigen::MatrixXd::Identity(pb.dim, pb.dim);
  if (pb.eq_lhs.rows() > 0) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(pb.eq_lhs,
                                          Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double smax = sv.size() > 0 ? sv(0) : 0.0;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
      if (sv(i) > 1e-12 * std::max(1.0, smax)) ++rank;
    x0 = svd.solve(pb.eq_rhs);
    const double res = (pb.eq_lhs * x0 - pb.eq_rhs).cwiseAbs().maxCoeff();
    if (res > kEqTol * (1.0 + pb.eq_rhs.cwiseAbs().maxCoeff())) {
      out.status = SolveStatus::Infeasible;
      return out;
    }
    N = svd.matrixV().rightCols(pb.dim - rank);
  }
  const int nz = static_cast<int>(N.cols());

  // Reduce the PSD maps to the free variables.
  std::vector<ReducedMap> maps(pb.psd.size());
  for (size_t j = 0; j < pb.psd.size(); ++j) {
    maps[j].constant = pb.psd[j].eval(x0);
    maps[j].coeffs.resize(nz);
    for (int k = 0; k < nz; ++k) {
      Eigen::MatrixXd Ck = Eigen::MatrixXd::Zero(maps[j].constant.rows(), maps[j].constant.cols());
      for (int i = 0; i < pb.dim; ++i)
        if (N(i, k) != 0.0) Ck.noalias() += N(i, k) * pb.psd[j].coeffs[i];
      maps[j].coeffs[k] = std::move(Ck);
    }
  }

  auto finish_solution = [&](const Eigen::VectorXd& z, int iters) -> SolveResult {
    SolveResult r;
    r.point = x0 + N * z;
    r.iterations = iters;
    r.status = recheck(pb, r.point, r.slacks) ? SolveStatus::Solution : SolveStatus::SolverFailure;
    return r;
  };

  if (nz == 0) {
    auto r = finish_solution(Eigen::VectorXd::Zero(0), 0);
    if (r.status == SolveStatus::SolverFailure) r.status = SolveStatus::Infeasible;
    return r;
  }

  // Ellipsoid method with deep cuts. Center c, shape H (E = {c + H^{1/2} s}).
  const double R = pb.radius;
  const double rmin = std::max(1e-14 * R, 1e-12);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(nz);
  Eigen::MatrixXd H = R * R * Eigen::MatrixXd::Identity(nz, nz);

  const int maxit =
      static_cast<int>(4.0 * nz * (nz + 1) * std::log(R / rmin)) + 200;

  bool have_best = false;
  Eigen::VectorXd best = c;
  double best_score = -std::numeric_limits<double>::infinity();

  for (int it = 0; it < maxit; ++it) {
    // Evaluate all constraints at the center.
    double worst_violation = -std::numeric_limits<double>::infinity();
    bool is_psd_cut = false;
    int cut_index = -1;
    double cut_value = 0.0;
    Eigen::VectorXd cut_eigvec;
    double min_psd = std::numeric_limits<double>::infinity();
    double min_nn = std::numeric_limits<double>::infinity();

    for (size_t j = 0; j < maps.size(); ++j) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(maps[j].eval(c));
      const double s = eig.eigenvalues()(0);
      min_psd = std::min(min_psd, s);
      const double viol = margin - s;
      if (viol > worst_violation) {
        worst_violation = viol;
        is_psd_cut = true;
        cut_index = static_cast<int>(j);
        cut_value = s;
        cut_eigvec = eig.eigenvectors().col(0);
      }
    }
    for (size_t j = 0; j < pb.nonneg.size(); ++j) {
      const int idx = pb.nonneg[j];
      const double v = x0(idx) + N.row(idx).dot(c);
      min_nn = std::min(min_nn, v);
      const double viol = -v;  // target 0 for nonnegativity
      if (viol > worst_violation) {
        worst_violation = viol;
        is_psd_cut = false;
        cut_index = idx;
        cut_value = v;
      }
    }

    const bool meets_margin = min_psd >= margin && min_nn >= 0.0;
    const bool acceptable = min_psd >= -kPsdTol && min_nn >= -kNonnegTol;
    if (meets_margin) return finish_solution(c, it);
    if (acceptable && min_psd > best_score) {
      best_score = min_psd;
      best = c;
      have_best = true;
    }

    // Cut direction (gradient of the active constraint) and deep-cut depth
    // measured against the acceptance floor, so tolerated points survive.
    Eigen::VectorXd g(nz);
    double accept_floor;
    if (is_psd_cut) {
      for (int k = 0; k < nz; ++k)
        g(k) = cut_eigvec.dot(maps[cut_index].coeffs[k] * cut_eigvec);
      accept_floor = -kPsdTol;
    } else {
      g = N.row(cut_index).transpose();
      accept_floor = -kNonnegTol;
    }
    const double beta = std::max(0.0, accept_floor - cut_value);

    const double gHg = g.dot(H * g);
    if (!(gHg > 0.0) || !std::isfinite(gHg)) {
      // Constraint insensitive to the free variables: nothing can improve it.
      if (have_best) return finish_solution(best, it);
      out.status = beta > 0.0 ? SolveStatus::Infeasible : SolveStatus::SolverFailure;
      out.iterations = it;
      return out;
    }
    const double gamma = std::sqrt(gHg);
    double alpha = beta / gamma;
    if (alpha >= 1.0) {
      // No point of the ellipsoid satisfies even the tolerated constraint.
      if (have_best) return finish_solution(best, it);
      out.status = SolveStatus::Infeasible;
      out.iterations = it;
      return out;
    }

    const Eigen::VectorXd Hg = H * g / gamma;
    if (nz == 1) {
      // Degenerate update: halve toward the feasible side.
      const double step = (1.0 + alpha) / 2.0;
      c += step * Hg;
      H *= ((1.0 - alpha) / 2.0) * ((1.0 - alpha) / 2.0);
    } else {
      const double n_ = static_cast<double>(nz);
      const double tau = (1.0 + n_ * alpha) / (n_ + 1.0);
      const double sigma = 2.0 * (1.0 + n_ * alpha) / ((n_ + 1.0) * (1.0 + alpha));
      const double delta = (n_ * n_ / (n_ * n_ - 1.0)) * (1.0 - alpha * alpha);
      c += tau * Hg;
      H = delta * (H - sigma * Hg * Hg.transpose());
      H = 0.5 * (H + H.transpose());
    }
    if (!c.allFinite() || !H.allFinite()) {
      out.status = SolveStatus::SolverFailure;
      out.iterations = it;
      return out;
    }
    if (H.trace() <= rmin * rmin) {
      if (have_best) return finish_solution(best, it);
      out.status = SolveStatus::Infeasible;
      out.iterations = it;
      return out;
    }
  }

  if (have_best) return finish_solution(best, maxit);
  out.status = SolveStatus::Infeasible;
  out.iterations = maxit;
  return out;
}

}  // namespace ratecert
