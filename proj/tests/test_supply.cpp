#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "ratecert/lifted.hpp"
#include "ratecert/model.hpp"
#include "ratecert/supply.hpp"

namespace rc = ratecert;

namespace {

// Random scalar piecewise-linear oracle through the origin with segment
// slopes in [m, L]; every chord slope then lies in [m, L] as well.
struct PiecewiseOracle {
  double m, L;
  std::vector<double> slopes;  // on knots -6 + 0.5*i
  static constexpr double kKnot0 = -6.0, kStep = 0.5;

  static PiecewiseOracle sample(double m, double L, std::mt19937& gen) {
    std::uniform_real_distribution<double> s(m, L);
    PiecewiseOracle o{m, L, {}};
    for (int i = 0; i < 48; ++i) o.slopes.push_back(s(gen));
    return o;
  }

  double operator()(double y) const {
    // Integrate slopes from 0 to y.
    double acc = 0.0, pos = 0.0;
    const double dir = y >= 0 ? 1.0 : -1.0;
    while (std::abs(pos - y) > 1e-15) {
      const int idx = std::clamp(
          static_cast<int>(std::floor((pos + (dir > 0 ? 1e-12 : -1e-12) - kKnot0) / kStep)), 0,
          47);
      const double edge = dir > 0 ? kKnot0 + (idx + 1) * kStep : kKnot0 + idx * kStep;
      const double next = dir > 0 ? std::min(edge, y) : std::max(edge, y);
      acc += slopes[idx] * (next - pos);
      pos = next;
    }
    return acc;
  }
};

}  // namespace

TEST_CASE("sector supply rate reproduces the (1/4, 2) class matrix") {
  const auto model = rc::build_algorithm(rc::AlgorithmSpec::gradient_descent(0.3));
  const auto basis = rc::lift(model, 0);
  const auto rate =
      rc::supply_rate(rc::OracleClass::sector(0.25, 2.0), basis, 0, 0, rc::kStar);
  // Basis is (x^k, u^k) and y^k = x^k, so Q acts directly on (y, u).
  Eigen::Matrix2d want;
  want << 0.5, -1.125, -1.125, 1.0;
  CHECK((rate.Q - want).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(rate.fcoef.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("normalized limit for L = +inf") {
  const auto model = rc::build_algorithm(rc::AlgorithmSpec::gradient_descent(0.3));
  const auto basis = rc::lift(model, 0);
  const auto rate =
      rc::supply_rate(rc::OracleClass::sector(0.0, rc::kInf), basis, 0, 0, rc::kStar);
  Eigen::Matrix2d want;
  want << 0.0, -0.5, -0.5, 0.0;
  CHECK((rate.Q - want).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("slope-restricted (0,1) pair gives the firm-nonexpansiveness form") {
  const auto model = rc::build_algorithm(rc::AlgorithmSpec::gradient_descent(0.3));
  const auto basis = rc::lift(model, 1);
  const auto rate =
      rc::supply_rate(rc::OracleClass::slope_restricted(0.0, 1.0), basis, 0, 0, 1);
  // Check ||du||^2 - du*dy on random basis vectors.
  std::mt19937 gen(3);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (int t = 0; t < 50; ++t) {
    Eigen::VectorXd v(basis.dim);
    for (int i = 0; i < basis.dim; ++i) v(i) = d(gen);
    const double dy = basis.y_row(0, 1).dot(v) - basis.y_row(0, 0).dot(v);
    const double du = basis.u_row(0, 1).dot(v) - basis.u_row(0, 0).dot(v);
    CHECK(v.dot(rate.Q * v) == doctest::Approx(du * du - du * dy).epsilon(1e-10));
  }
}

TEST_CASE("supply rate preconditions") {
  const auto model = rc::build_algorithm(rc::AlgorithmSpec::gradient_descent(0.3));
  const auto basis = rc::lift(model, 0);
  const auto sector = rc::OracleClass::sector(0.1, 1.0);
  const auto fcls = rc::OracleClass::smooth_strongly_convex(0.1, 1.0);
  CHECK_THROWS_AS(rc::supply_rate(sector, basis, 0, 0, 0), std::invalid_argument);
  CHECK_THROWS_AS(rc::supply_rate(sector, basis, 0, 1, rc::kStar), std::invalid_argument);
  CHECK_THROWS_AS(
      rc::supply_rate({rc::OracleKind::SmoothStronglyConvex, 0.0, rc::kInf}, basis, 0, 0,
                      rc::kStar),
      std::invalid_argument);
  CHECK_NOTHROW(rc::supply_rate(fcls, basis, 0, rc::kStar, 0));
}

TEST_CASE("enumeration counts: 6 F-rates, 3 M-rates, 1 sector rate") {
  const auto nest = rc::build_algorithm(rc::AlgorithmSpec::nesterov(1.0, 0.5));
  const auto b1 = rc::lift(nest, 1);
  CHECK(rc::enumerate_supply_rates({rc::OracleClass::smooth_strongly_convex(0.1, 1.0)}, b1)
            .size() == 6);
  CHECK(rc::enumerate_supply_rates({rc::OracleClass::slope_restricted(0.1, 1.0)}, b1).size() ==
        3);
  const auto gd = rc::build_algorithm(rc::AlgorithmSpec::gradient_descent(0.3));
  const auto b0 = rc::lift(gd, 0);
  CHECK(rc::enumerate_supply_rates({rc::OracleClass::sector(0.1, 1.0)}, b0).size() == 1);
}

TEST_CASE("nestedness: F symmetrized is the M form; M with star is the sector form") {
  const double m = 0.5, L = 2.0;
  const auto nest = rc::build_algorithm(rc::AlgorithmSpec::nesterov(1.0, 0.5));
  const auto basis = rc::lift(nest, 1);
  const auto F = rc::OracleClass::smooth_strongly_convex(m, L);
  const auto M = rc::OracleClass::slope_restricted(m, L);
  const auto C = rc::OracleClass::sector(m, L);

  for (auto [a, b] : {std::pair{0, 1}, {0, rc::kStar}, {1, rc::kStar}}) {
    const auto fab = rc::supply_rate(F, basis, 0, a, b);
    const auto fba = rc::supply_rate(F, basis, 0, b, a);
    const auto mab = rc::supply_rate(M, basis, 0, a, b);
    CHECK(((fab.Q + fba.Q) * (L - m) - mab.Q).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((fab.fcoef + fba.fcoef).cwiseAbs().maxCoeff() <= 1e-12);
  }
  // One point at star reduces M to the sector form.
  const auto mstar = rc::supply_rate(M, basis, 0, 0, rc::kStar);
  const auto cstar = rc::supply_rate(C, basis, 0, 0, rc::kStar);
  CHECK((mstar.Q - cstar.Q).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("consequence inequalities for sampled class members") {
  const double m = 0.3, L = 2.5;
  std::mt19937 gen(11);
  std::uniform_real_distribution<double> yd(-3.0, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto oracle = PiecewiseOracle::sample(m, L, gen);
    for (int i = 0; i < 500; ++i) {
      const double y = yd(gen);
      const double u = oracle(y);
      CHECK(m * std::abs(y) <= std::abs(u) + 1e-12);
      CHECK(std::abs(u) <= L * std::abs(y) + 1e-12);
      CHECK(m * y * y <= u * y + 1e-12);
      CHECK(u * y <= L * y * y + 1e-12);
    }
  }
}

TEST_CASE("fcoef-free rates evaluate nonpositive on true class signals") {
  const double m = 0.4, L = 1.6, eta = 0.5;
  const auto model = rc::build_algorithm(rc::AlgorithmSpec::gradient_descent(eta));
  const auto basis = rc::lift(model, 1);
  const auto rates = rc::enumerate_supply_rates({rc::OracleClass::slope_restricted(m, L)}, basis);

  std::mt19937 gen(23);
  std::uniform_real_distribution<double> x0d(-2.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto oracle = PiecewiseOracle::sample(m, L, gen);
    double x = x0d(gen);
    const double u0 = oracle(x);
    const double x1 = x - eta * u0;
    const double u1 = oracle(x1);
    Eigen::VectorXd v(basis.dim);
    v << x, u0, u1;
    for (const auto& rate : rates) {
      CHECK(rate.fcoef.cwiseAbs().maxCoeff() == 0.0);
      CHECK(v.dot(rate.Q * v) <= 1e-12);
    }
  }
}

TEST_CASE("F-kind rate bounds the function gap for f(y) = y^2") {
  // f in F(1, 3) since f'' = 2; pair (star, k) bounds f(y^k) - f*.
  const double m = 1.0, L = 3.0;
  const auto model = rc::build_algorithm(rc::AlgorithmSpec::gradient_descent(0.3));
  const auto basis = rc::lift(model, 0);
  const auto rate = rc::supply_rate(rc::OracleClass::smooth_strongly_convex(m, L), basis, 0,
                                    rc::kStar, 0);
  REQUIRE(rate.fcoef.size() == 1);
  CHECK(rate.fcoef(0) == doctest::Approx(1.0));
  for (double y = -3.0; y <= 3.0; y += 0.1) {
    Eigen::VectorXd v(basis.dim);
    v << y, 2.0 * y;  // u = f'(y)
    const double supply = v.dot(rate.Q * v);
    const double gap = y * y;  // f(y) - f*
    CHECK(supply <= gap + 1e-12);
  }
  // Spot value from the analysis: at y = 2 the supply is 3 <= f(2) - f* = 4.
  Eigen::VectorXd v(basis.dim);
  v << 2.0, 4.0;
  CHECK(v.dot(rate.Q * v) == doctest::Approx(3.0));
}

TEST_CASE("lifted basis rows satisfy the model recursions") {
  const auto model = rc::build_algorithm(rc::AlgorithmSpec::nesterov(0.7, 0.4));
  const auto basis = rc::lift(model, 2);
  CHECK(basis.dim == model.n + 3 * model.p);
  for (int i = 0; i <= basis.r; ++i) {
    const Eigen::MatrixXd lhs_xi = basis.xi.at(i + 1);
    const Eigen::MatrixXd rhs_xi = model.A * basis.xi.at(i) + model.B * basis.u.at(i);
    CHECK((lhs_xi - rhs_xi).cwiseAbs().maxCoeff() <= 1e-12);
    const Eigen::MatrixXd rhs_y = model.C * basis.xi.at(i) + model.D * basis.u.at(i);
    CHECK((basis.y.at(i) - rhs_y).cwiseAbs().maxCoeff() <= 1e-12);
  }
}
