#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ratecert/sproc.hpp"

namespace rc = ratecert;

namespace {

// Sector class form mL y^2 - (L+m) yu + u^2 as a 2x2 matrix over (y, u).
Eigen::Matrix2d sector_form(double m, double L) {
  Eigen::Matrix2d S;
  S << m * L, -(L + m) / 2.0, -(L + m) / 2.0, 1.0;
  return S;
}

}  // namespace

TEST_CASE("the four identities hold to 1e-10 relative at 1e4 random samples") {
  std::mt19937 gen(17);
  std::uniform_real_distribution<double> yu(-5.0, 5.0);
  std::uniform_real_distribution<double> md(0.05, 2.0);
  std::uniform_real_distribution<double> gapd(0.1, 5.0);

  for (int s = 0; s < 10000; ++s) {
    const double m = md(gen);
    const double L = m + gapd(gen);
    const double y = yu(gen), u = yu(gen);
    const Eigen::Vector2d x(y, u);
    const double lhs = x.dot(sector_form(m, L) * x);
    for (const auto& id : rc::sector_identities(m, L)) {
      const double res = id.residual_form.dot(x);
      const double rhs = id.coeff * x.dot(id.conclusion * x) + id.weight * res * res;
      const double scale = std::abs(lhs) + std::abs(rhs) + 1.0;
      CHECK(std::abs(lhs - rhs) <= 1e-10 * scale);
    }
  }
}

TEST_CASE("identity coefficients at m=1, L=3") {
  const auto ids = rc::sector_identities(1.0, 3.0);
  CHECK(ids[0].coeff == doctest::Approx(1.0));
  CHECK(ids[0].weight == doctest::Approx(2.0));
  CHECK(ids[1].coeff == doctest::Approx(1.0 / 3.0));
  CHECK(ids[2].coeff == doctest::Approx(2.0));
}

TEST_CASE("decompositions stay exact for nearly equal bounds") {
  const double m = 1.0, L = 1.0 + 1e-9;
  const Eigen::Vector2d x(0.7, -1.3);
  const double lhs = x.dot(sector_form(m, L) * x);
  for (const auto& id : rc::sector_identities(m, L)) {
    const double res = id.residual_form.dot(x);
    const double rhs = id.coeff * x.dot(id.conclusion * x) + id.weight * res * res;
    CHECK(std::abs(lhs - rhs) <= 1e-9 * (std::abs(lhs) + 1.0));
  }
  CHECK_THROWS_AS(rc::sector_identities(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(rc::sector_identities(1.0, 1.0), std::invalid_argument);
}

TEST_CASE("conclusion inequalities hold for sector members") {
  std::mt19937 gen(29);
  std::uniform_real_distribution<double> yd(-3.0, 3.0);
  const double m = 0.4, L = 2.2;
  std::uniform_real_distribution<double> ad(m, L);
  const auto ids = rc::sector_identities(m, L);
  for (int s = 0; s < 2000; ++s) {
    const double y = yd(gen);
    const Eigen::Vector2d x(y, ad(gen) * y);  // u = a y, a in [m, L]
    for (const auto& id : ids) CHECK(x.dot(id.conclusion * x) <= 1e-12);
  }
}

TEST_CASE("find_multiplier recovers (L-m)/(2m) within 1e-6") {
  std::mt19937 gen(31);
  std::uniform_real_distribution<double> md(0.1, 1.5);
  std::uniform_real_distribution<double> gapd(0.2, 4.0);
  for (int trial = 0; trial < 25; ++trial) {
    const double m = md(gen);
    const double L = m + gapd(gen);
    Eigen::Matrix2d Q;
    Q << m * m, 0.0, 0.0, -1.0;  // conclusion m^2 y^2 - u^2 <= 0
    const auto res = rc::find_multiplier(sector_form(m, L), Q);
    REQUIRE(res.found);
    CHECK(std::abs(res.lambda - (L - m) / (2.0 * m)) <= 1e-6);
  }
}

TEST_CASE("NoMultiplier comes with a violating witness") {
  Eigen::Matrix2d S, Q;
  S << 1.0, 0.0, 0.0, -1.0;
  Q << 1.0, -2.0, -2.0, 1.0;  // Q = (y - u)^2 - 2yu form, positive on y = -u
  const auto res = rc::find_multiplier(S, Q);
  CHECK_FALSE(res.found);
  CHECK_FALSE(res.degenerate_hypothesis);
  REQUIRE(res.witness.has_value());
  const Eigen::Vector2d x = *res.witness;
  CHECK(x.dot(S * x) <= 1e-10);
  CHECK(x.dot(Q * x) > 0.0);
}

TEST_CASE("degenerate hypothesis set is reported, not certified") {
  Eigen::Matrix2d S = Eigen::Matrix2d::Identity();
  Eigen::Matrix2d Q;
  Q << -1.0, 0.0, 0.0, 0.0;
  const auto res = rc::find_multiplier(S, Q);
  CHECK_FALSE(res.found);
  CHECK(res.degenerate_hypothesis);
  CHECK_FALSE(res.witness.has_value());
}

TEST_CASE("non-symmetric input is rejected") {
  Eigen::Matrix2d S, Q;
  S << 1.0, 0.5, -0.5, 1.0;
  Q = Eigen::Matrix2d::Identity();
  CHECK_THROWS_AS(rc::find_multiplier(S, Q), std::invalid_argument);
}

TEST_CASE("losslessness spot check on random pairs") {
  std::mt19937 gen(37);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    Eigen::Matrix2d S, Q;
    const double s01 = d(gen), q01 = d(gen);
    S << d(gen), s01, s01, d(gen);
    Q << d(gen), q01, q01, d(gen);
    const auto res = rc::find_multiplier(S, Q);
    if (!res.found && !res.degenerate_hypothesis) {
      REQUIRE(res.witness.has_value());
      const Eigen::Vector2d x = *res.witness;
      CHECK(x.dot(S * x) <= 1e-10);
      CHECK(x.dot(Q * x) > 0.0);
    }
  }
}
