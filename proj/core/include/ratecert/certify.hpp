#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "ratecert/lifted.hpp"
#include "ratecert/model.hpp"
#include "ratecert/sdp.hpp"
#include "ratecert/supply.hpp"

namespace ratecert {

enum class LyapunovKind { Quadratic, QuadraticPlusFunctionGap };

/// Dissipation-inequality feasibility program for a fixed candidate rate.
/// Decision vector layout: vech(P) first, then the lambda multipliers, then
/// (when any oracle is SmoothStronglyConvex) the mu multipliers.
struct DissipationProgram {
  double rho_sq = 0.0;
  FeasibilityProblem problem;
  LiftedBasis basis;
  std::vector<SupplyRate> rates;
  int np = 0;          ///< side of P, equal to n*(r+1)
  int num_p_vars = 0;  ///< np*(np+1)/2
  bool has_function_gap = false;

  Eigen::VectorXd pack(const Eigen::MatrixXd& P, const Eigen::VectorXd& lambdas,
                       const Eigen::VectorXd& mus) const;
  Eigen::MatrixXd unpack_P(const Eigen::VectorXd& x) const;
  Eigen::VectorXd unpack_lambdas(const Eigen::VectorXd& x) const;
  Eigen::VectorXd unpack_mus(const Eigen::VectorXd& x) const;
};

/// Builds the program certifying rate rho over a window of r steps.
/// For Sector/SlopeRestricted-only analyses the normalization P >= I is used;
/// when any oracle is SmoothStronglyConvex the function-gap equalities pin
/// the multipliers instead and P is sign-free (requires r >= 1).
DissipationProgram assemble_program(const AlgorithmModel& model, int r, double rho);

struct Certificate {
  double rho = 0.0;
  Eigen::MatrixXd P;
  Eigen::VectorXd lambdas;
  Eigen::VectorXd mus;
  std::vector<double> margins;  ///< min eigenvalue slack of each PSD block
  int window = 0;
  LyapunovKind kind = LyapunovKind::Quadratic;
  double scale = 1.0;  ///< internal rescale factor; Lyapunov value is
                       ///< scale * v' P v (+ function gap for the gap kind)
};

struct ProbeRecord {
  double rho = 0.0;
  SolveStatus status = SolveStatus::Infeasible;
};

struct CertificationResult {
  bool found = false;
  Certificate certificate;
  std::vector<ProbeRecord> probes;
};

struct CertifyOptions {
  double tol = 1e-4;
  double rho_max = 1.5;
  int max_probes = 40;
  double margin = 1e-9;
  bool rescale = true;  ///< rescale the problem to L = 1 before solving
};

/// Bisection on rho: returns the smallest feasible rate within tol plus its
/// certificate, or found=false (probe record kept) when infeasible at
/// rho_max. Solver failures are treated as infeasible probes.
/// Throws std::runtime_error if the probe history violates monotone
/// feasibility.
CertificationResult certify_rate(const AlgorithmModel& model, int r, const CertifyOptions& opts);

struct SublinearCertificate {
  double P = 0.0;  ///< storage coefficient; V(x) = scale * P * ||x - x*||^2
  Eigen::VectorXd lambdas;
  std::vector<double> margins;
  double scale = 1.0;
};

/// Certifies the 1/k function-value rate for a gradient-descent-shaped model
/// (n = 1, p = 1) whose oracle is SmoothStronglyConvex with m = 0. The
/// certificate implies f(x^k) - f* <= V(x^0)/(k+1).
/// Throws std::invalid_argument when m > 0 (use geometric certification).
std::optional<SublinearCertificate> certify_sublinear(const AlgorithmModel& model,
                                                      double margin = 1e-9);

struct VerificationReport {
  std::vector<double> lmi_slacks;      ///< min eigenvalue of each PSD block
  double max_sample_violation = 0.0;   ///< worst scalar dissipation violation
  std::vector<std::string> failures;
  bool ok(double slack_tol = 1e-9) const;
};

/// Re-checks a certificate against the assembled program: eigenvalue slacks
/// at the certificate point plus random basis-vector samples of the scalar
/// dissipation inequality. Used to reject false-feasible solver output.
VerificationReport verify_certificate(const AlgorithmModel& model, const Certificate& cert,
                                      int sample_count = 1000);

/// Canonical internal rescale to L = 1: oracle outputs are divided by the
/// largest finite upper slope bound. Returns the scaled model plus the factor.
std::pair<AlgorithmModel, double> rescale_model(const AlgorithmModel& model);

}  // namespace ratecert
