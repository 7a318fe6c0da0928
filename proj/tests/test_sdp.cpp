#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include <Eigen/Dense>

#include "ratecert/sdp.hpp"

namespace rc = ratecert;

namespace {

double min_eig(const Eigen::MatrixXd& M) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(M, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

}  // namespace

TEST_CASE("equality-forced scalar problem") {
  rc::FeasibilityProblem pb;
  pb.dim = 1;
  rc::AffineMatrixMap map;
  map.constant = Eigen::MatrixXd::Zero(1, 1);
  map.coeffs = {Eigen::MatrixXd::Ones(1, 1)};
  pb.psd.push_back(map);
  pb.eq_lhs = Eigen::MatrixXd::Ones(1, 1);
  pb.eq_rhs = Eigen::VectorXd::Constant(1, 3.0);
  const auto res = rc::solve_feasibility(pb, 1e-9);
  REQUIRE(res.status == rc::SolveStatus::Solution);
  CHECK(res.point(0) == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("S-procedure instance has the unique multiplier lambda = 1") {
  // [[3 - a, -2], [-2, 1 + a]] >= 0 with a >= 0 forces a = 1 (m=1, L=3).
  rc::FeasibilityProblem pb;
  pb.dim = 1;
  rc::AffineMatrixMap map;
  map.constant.resize(2, 2);
  map.constant << 3.0, -2.0, -2.0, 1.0;
  Eigen::MatrixXd coeff(2, 2);
  coeff << -1.0, 0.0, 0.0, 1.0;
  map.coeffs = {coeff};
  pb.psd.push_back(map);
  pb.nonneg = {0};
  const auto res = rc::solve_feasibility(pb, 1e-9);
  REQUIRE(res.status == rc::SolveStatus::Solution);
  CHECK(std::abs(res.point(0) - 1.0) <= 1e-3);
}

TEST_CASE("plainly infeasible problem") {
  rc::FeasibilityProblem pb;
  pb.dim = 1;
  rc::AffineMatrixMap map;
  map.constant = -Eigen::MatrixXd::Ones(1, 1);
  map.coeffs = {Eigen::MatrixXd::Zero(1, 1)};
  pb.psd.push_back(map);
  const auto res = rc::solve_feasibility(pb, 1e-9);
  CHECK(res.status == rc::SolveStatus::Infeasible);
}

TEST_CASE("input validation") {
  rc::FeasibilityProblem pb;
  pb.dim = 2;
  rc::AffineMatrixMap map;
  map.constant = Eigen::MatrixXd::Zero(1, 1);
  map.coeffs = {Eigen::MatrixXd::Ones(1, 1)};  // wrong coefficient count
  pb.psd.push_back(map);
  CHECK_THROWS_AS(rc::solve_feasibility(pb, 1e-9), std::invalid_argument);

  rc::FeasibilityProblem nan_pb;
  nan_pb.dim = 1;
  rc::AffineMatrixMap nan_map;
  nan_map.constant = Eigen::MatrixXd::Constant(1, 1, std::nan(""));
  nan_map.coeffs = {Eigen::MatrixXd::Ones(1, 1)};
  nan_pb.psd.push_back(nan_map);
  CHECK_THROWS_AS(rc::solve_feasibility(nan_pb, 1e-9), std::invalid_argument);

  CHECK_THROWS_AS(rc::solve_feasibility(rc::FeasibilityProblem{}, -1.0), std::invalid_argument);
}

TEST_CASE("100 random strictly feasible problems solve with half the construction margin") {
  std::mt19937 gen(42);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::uniform_int_distribution<int> dim_d(2, 5);
  std::uniform_int_distribution<int> size_d(2, 4);
  const double construction_margin = 0.1;

  for (int trial = 0; trial < 100; ++trial) {
    const int n = dim_d(gen);
    rc::FeasibilityProblem pb;
    pb.dim = n;
    pb.radius = 10.0;
    Eigen::VectorXd x0(n);
    for (int i = 0; i < n; ++i) x0(i) = d(gen);

    const int blocks = 1 + trial % 2;
    for (int b = 0; b < blocks; ++b) {
      const int s = size_d(gen);
      rc::AffineMatrixMap map;
      for (int i = 0; i < n; ++i) {
        Eigen::MatrixXd M(s, s);
        for (int r = 0; r < s; ++r)
          for (int c = 0; c <= r; ++c) M(r, c) = M(c, r) = d(gen);
        map.coeffs.push_back(M);
      }
      // Make the map strictly feasible at x0 with a generous slack.
      Eigen::MatrixXd Z(s, s);
      for (int r = 0; r < s; ++r)
        for (int c = 0; c < s; ++c) Z(r, c) = d(gen);
      Eigen::MatrixXd W = Z * Z.transpose() + 2.0 * construction_margin *
                                                  Eigen::MatrixXd::Identity(s, s);
      map.constant = W;
      for (int i = 0; i < n; ++i) map.constant -= x0(i) * map.coeffs[i];
      pb.psd.push_back(std::move(map));
    }

    const auto res = rc::solve_feasibility(pb, construction_margin);
    REQUIRE(res.status == rc::SolveStatus::Solution);
    double worst = 1e300;
    for (const auto& map : pb.psd) worst = std::min(worst, min_eig(map.eval(res.point)));
    CHECK(worst >= construction_margin / 2.0);
  }
}

TEST_CASE("determinism: identical problems give identical results") {
  rc::FeasibilityProblem pb;
  pb.dim = 2;
  rc::AffineMatrixMap map;
  map.constant.resize(2, 2);
  map.constant << 2.0, 0.3, 0.3, 1.5;
  Eigen::MatrixXd c0(2, 2), c1(2, 2);
  c0 << 1.0, 0.2, 0.2, -0.5;
  c1 << -0.4, 0.1, 0.1, 0.9;
  map.coeffs = {c0, c1};
  pb.psd.push_back(map);
  pb.nonneg = {1};
  const auto a = rc::solve_feasibility(pb, 1e-6);
  const auto b = rc::solve_feasibility(pb, 1e-6);
  CHECK(a.status == b.status);
  REQUIRE(a.status == rc::SolveStatus::Solution);
  CHECK((a.point - b.point).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("no false positives: returned solutions pass an independent eigenvalue check") {
  std::mt19937 gen(5);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  int solutions = 0;
  for (int trial = 0; trial < 50; ++trial) {
    rc::FeasibilityProblem pb;
    pb.dim = 3;
    pb.radius = 5.0;
    rc::AffineMatrixMap map;
    map.constant.resize(3, 3);
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c <= r; ++c) map.constant(r, c) = map.constant(c, r) = d(gen);
    for (int i = 0; i < 3; ++i) {
      Eigen::MatrixXd M(3, 3);
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c <= r; ++c) M(r, c) = M(c, r) = d(gen);
      map.coeffs.push_back(M);
    }
    pb.psd.push_back(map);
    const auto res = rc::solve_feasibility(pb, 1e-9);
    if (res.status == rc::SolveStatus::Solution) {
      ++solutions;
      CHECK(min_eig(pb.psd[0].eval(res.point)) >= -1e-9);
    }
  }
  CHECK(solutions > 0);  // the sample must actually exercise the Solution path
}
