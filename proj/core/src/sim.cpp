#include "ratecert/sim.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace ratecert {

namespace {

// Shifted log-sum-exp of the three affine exponents of F1.
struct LseParts {
  Eigen::Vector3d w;  // softmax weights
  double lse = 0.0;
};

LseParts lse_parts(const Eigen::Vector2d& x) {
  Eigen::Vector3d a(-x(0), x(0) / 3.0 + x(1), x(0) / 3.0 - x(1));
  const double amax = a.maxCoeff();
  Eigen::Vector3d e = (a.array() - amax).exp();
  const double s = e.sum();
  LseParts out;
  out.w = e / s;
  out.lse = amax + std::log(s);
  return out;
}

// Gradients of the affine exponents as columns.
Eigen::Matrix<double, 2, 3> lse_jacobian() {
  Eigen::Matrix<double, 2, 3> J;
  J << -1.0, 1.0 / 3.0, 1.0 / 3.0, 0.0, 1.0, -1.0;
  return J;
}

}  // namespace

double TestFunction::value(const Eigen::Vector2d& x) const {
  if (id == TestFunctionId::F2) return 0.5 * (L * x(0) * x(0) + m * x(1) * x(1));
  return 0.5 * m * x.squaredNorm() + (L - m) * lse_parts(x).lse;
}

Eigen::Vector2d TestFunction::gradient(const Eigen::Vector2d& x) const {
  if (id == TestFunctionId::F2) return {L * x(0), m * x(1)};
  const auto parts = lse_parts(x);
  return m * x + (L - m) * (lse_jacobian() * parts.w);
}

Eigen::Matrix2d TestFunction::hessian(const Eigen::Vector2d& x) const {
  Eigen::Matrix2d H;
  if (id == TestFunctionId::F2) {
    H << L, 0.0, 0.0, m;
    return H;
  }
  const auto parts = lse_parts(x);
  const auto J = lse_jacobian();
  const Eigen::Vector2d g = J * parts.w;
  Eigen::Matrix2d Hl = J * parts.w.asDiagonal() * J.transpose() - g * g.transpose();
  return m * Eigen::Matrix2d::Identity() + (L - m) * Hl;
}

Eigen::Vector2d TestFunction::minimizer() const {
  if (id == TestFunctionId::F2) return Eigen::Vector2d::Zero();
  // Gradient-descent warm start, then Newton to drive ||grad|| <= 1e-12.
  Eigen::Vector2d x = Eigen::Vector2d::Zero();
  for (int k = 0; k < 200; ++k) x -= (1.0 / L) * gradient(x);
  for (int k = 0; k < 100; ++k) {
    const Eigen::Vector2d g = gradient(x);
    if (g.norm() <= 1e-12) break;
    x -= hessian(x).ldlt().solve(g);
  }
  return x;
}

Trajectory run_trajectory(const TestFunction& fn, const AlgorithmSpec& spec,
                          const Eigen::Vector2d& x0, int steps) {
  if (steps < 1) throw std::invalid_argument("run_trajectory: steps must be >= 1");
  if (spec.family != AlgorithmFamily::GradientDescent && spec.family != AlgorithmFamily::Nesterov)
    throw std::invalid_argument("run_trajectory: family must be GradientDescent or Nesterov");
  const bool nesterov = spec.family == AlgorithmFamily::Nesterov;
  if (nesterov && !spec.beta)
    throw std::invalid_argument("run_trajectory: Nesterov requires beta");
  const double beta = nesterov ? *spec.beta : 0.0;

  Trajectory traj;
  traj.x_star = fn.minimizer();
  traj.f_star = fn.value(traj.x_star);
  traj.x.reserve(steps + 1);
  traj.x.push_back(x0);
  Eigen::Vector2d xprev = x0;  // x^{-1} = x^0
  for (int k = 0; k < steps; ++k) {
    const Eigen::Vector2d xk = traj.x.back();
    const Eigen::Vector2d yk = nesterov ? Eigen::Vector2d(xk + beta * (xk - xprev)) : xk;
    traj.y.push_back(yk);
    const Eigen::Vector2d xnext = yk - spec.eta * fn.gradient(yk);
    if (!xnext.allFinite() || xnext.norm() > 1e12)
      throw std::runtime_error("run_trajectory: divergence at step " + std::to_string(k + 1));
    xprev = xk;
    traj.x.push_back(xnext);
  }
  // Query point for the final iterate (used by window-based Lyapunov traces).
  const Eigen::Vector2d xN = traj.x.back();
  traj.y.push_back(nesterov ? Eigen::Vector2d(xN + beta * (xN - xprev)) : xN);

  for (size_t k = 0; k < traj.x.size(); ++k) {
    traj.dist_sq.push_back((traj.x[k] - traj.x_star).squaredNorm());
    traj.gap.push_back(fn.value(traj.x[k]) - traj.f_star);
    traj.gap_at_y.push_back(fn.value(traj.y[k]) - traj.f_star);
    traj.grad_norm.push_back(fn.gradient(traj.x[k]).norm());
  }
  return traj;
}

LyapunovTrace lyapunov_trace(const Trajectory& traj, const TestFunction& fn,
                             const AlgorithmSpec& spec, const Certificate& cert) {
  const AlgorithmModel model = build_algorithm(spec);
  const int n = model.n;
  const int r = cert.window;
  const int np = n * (r + 1);
  if (cert.P.rows() != np || cert.P.cols() != np)
    throw std::invalid_argument("lyapunov_trace: certificate P does not match the model window");
  const int N = static_cast<int>(traj.x.size()) - 1;
  if (r + 1 > N)
    throw std::invalid_argument("lyapunov_trace: window extends past the trajectory end");

  // Per-coordinate state at step k: (x^k - x*) for n = 1; (x^k - x*, x^{k-1} - x*)
  // for the Nesterov state, with x^{-1} = x^0.
  auto state = [&](int k, int coord) {
    Eigen::VectorXd xi(n);
    xi(0) = traj.x[k](coord) - traj.x_star(coord);
    if (n == 2) xi(1) = traj.x[k == 0 ? 0 : k - 1](coord) - traj.x_star(coord);
    return xi;
  };

  LyapunovTrace out;
  const int last = N - r;  // last step with a full window
  for (int k = 0; k <= last; ++k) {
    double v = 0.0;
    for (int c = 0; c < 2; ++c) {
      Eigen::VectorXd vk(np);
      for (int i = 0; i <= r; ++i) vk.segment(i * n, n) = state(k + i, c);
      v += vk.dot(cert.P * vk);
    }
    v *= cert.scale;
    if (cert.kind == LyapunovKind::QuadraticPlusFunctionGap) v += traj.gap_at_y[k];
    out.value.push_back(v);
  }

  const double floor = 1e-8 * std::max(out.value[0], 0.0);
  const double rho_sq = cert.rho * cert.rho;
  out.valid_length = 0;
  for (double v : out.value) {
    if (!(v > floor)) break;
    ++out.valid_length;
  }
  for (int k = 0; k + 1 < static_cast<int>(out.value.size()); ++k) {
    if (!(out.value[k] > floor) || !(out.value[k + 1] > floor)) break;
    const double ratio = out.value[k + 1] / out.value[k];
    out.ratio.push_back(ratio);
    out.max_ratio = std::max(out.max_ratio, ratio);
    if (ratio > rho_sq + 1e-9) out.monotone_within = false;
  }
  return out;
}

std::vector<Eigen::VectorXd> concrete_states(const AlgorithmSpec& spec,
                                             const std::vector<ScalarOracle>& oracles,
                                             const Eigen::VectorXd& xi0, int steps) {
  const AlgorithmModel model = build_algorithm(spec);
  if (static_cast<int>(oracles.size()) != model.p)
    throw std::invalid_argument("concrete_states: oracle count does not match the family");
  if (xi0.size() != model.n)
    throw std::invalid_argument("concrete_states: initial state has the wrong dimension");
  const double eta = spec.eta;

  std::vector<Eigen::VectorXd> out;
  out.reserve(steps + 1);
  out.push_back(xi0);
  for (int k = 0; k < steps; ++k) {
    const Eigen::VectorXd& xi = out.back();
    Eigen::VectorXd next(model.n);
    switch (spec.family) {
      case AlgorithmFamily::GradientDescent:
        next(0) = xi(0) - eta * oracles[0](xi(0));
        break;
      case AlgorithmFamily::ProjectedGradient:
        next(0) = oracles[1](xi(0) - eta * oracles[0](xi(0)));
        break;
      case AlgorithmFamily::Nesterov: {
        const double beta = spec.beta.value();
        const double y = (1.0 + beta) * xi(0) - beta * xi(1);
        next(0) = y - eta * oracles[0](y);
        next(1) = xi(0);
        break;
      }
      case AlgorithmFamily::AdmmGradientForm: {
        // z-update solves the implicit equation u1 = f'(z - w - eta u1);
        // the oracles must be linear, so the slope resolves it exactly.
        const double z = xi(0), w = xi(1);
        const double a1 = oracles[0](1.0) - oracles[0](0.0);
        const double a2 = oracles[1](1.0) - oracles[1](0.0);
        const double u1 = a1 * (z - w) / (1.0 + eta * a1);
        const double u2 = a2 * (z - eta * u1) / (1.0 + eta * a2);
        next(0) = z - eta * u1 - eta * u2;
        next(1) = eta * u2;
        break;
      }
      case AlgorithmFamily::AdmmProxForm: {
        const double z = xi(0), w = xi(1);
        const double xf = oracles[0](z - w);   // prox_{eta f}
        const double zn = oracles[1](xf + w);  // prox_{eta g}
        next(0) = zn;
        next(1) = w + xf - zn;
        break;
      }
      case AlgorithmFamily::Custom:
        throw std::invalid_argument("concrete_states: no concrete form for custom models");
    }
    out.push_back(next);
  }
  return out;
}

std::vector<Eigen::VectorXd> model_states_linear(const AlgorithmModel& model,
                                                 const Eigen::VectorXd& slopes,
                                                 const Eigen::VectorXd& xi0, int steps) {
  if (slopes.size() != model.p)
    throw std::invalid_argument("model_states_linear: slope count does not match p");
  if (xi0.size() != model.n)
    throw std::invalid_argument("model_states_linear: initial state has the wrong dimension");
  // u = diag(a) (C xi + D u)  =>  u = (I - diag(a) D)^{-1} diag(a) C xi
  const Eigen::MatrixXd Adiag = slopes.asDiagonal();
  const Eigen::MatrixXd loop = Eigen::MatrixXd::Identity(model.p, model.p) - Adiag * model.D;
  const Eigen::MatrixXd gain = loop.partialPivLu().solve(Adiag * model.C);

  std::vector<Eigen::VectorXd> out;
  out.reserve(steps + 1);
  out.push_back(xi0);
  for (int k = 0; k < steps; ++k) {
    const Eigen::VectorXd& xi = out.back();
    out.push_back(model.A * xi + model.B * (gain * xi));
  }
  return out;
}

}  // namespace ratecert
