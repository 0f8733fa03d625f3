#include <doctest.h>

#include <cmath>
#include <numbers>

#include "tqb/diagnostics.hpp"
#include "tqb/error.hpp"

using namespace tqb;

TEST_CASE("discrete norms") {
  Eigen::VectorXd a(2), b = Eigen::VectorXd::Zero(2);
  a << 3, 4;
  const NormPair n = l2_linf(a, b, 1.0);
  CHECK(n.l2 == doctest::Approx(5.0));
  CHECK(n.linf == 4.0);
  CHECK(l2_linf(a, b, 0.25).l2 == doctest::Approx(2.5));
  CHECK_THROWS_AS(l2_linf(a, Eigen::VectorXd::Zero(3), 1.0), Error);
}

TEST_CASE("relative error") {
  Eigen::VectorXd prev(2), next(2);
  prev << 1, 0;
  next << 1, 1;
  CHECK(relative_error(prev, next) == doctest::Approx(std::sqrt(0.5)));
  CHECK(relative_error(next, next) == 0.0);
  CHECK(relative_error(7.0 * prev, 7.0 * next) == doctest::Approx(relative_error(prev, next)));
  CHECK_THROWS_AS(relative_error(prev, Eigen::VectorXd::Zero(2)), Error);
}

TEST_CASE("interior maxima with prominence") {
  Eigen::VectorXd y(200);
  for (int i = 0; i < 200; ++i) y[i] = std::sin(9 * std::numbers::pi * i / 199.0);
  CHECK(count_interior_maxima(y, 0.1) == 5);
  CHECK(count_interior_maxima(Eigen::VectorXd::Constant(50, 2.0), 1e-6) == 0);

  Eigen::VectorXd ripple(7);
  ripple << 0, 1, 0.95, 1.02, 0, 0.5, 0;
  CHECK(count_interior_maxima(ripple, 0.2) == 2);
  CHECK(count_interior_maxima(ripple, 0.01) == 3);

  Eigen::VectorXd plateau(6);
  plateau << 0, 1, 1, 1, 0, 0;
  CHECK(count_interior_maxima(plateau, 0.5) == 1);
  CHECK_THROWS_AS(count_interior_maxima(ripple, 0.0), Error);
}

TEST_CASE("period estimate") {
  std::vector<TimeValue> s;
  for (int i = 0; i <= 3000; ++i) {
    const double t = 0.01 * i;
    s.push_back({t, std::sin(2 * std::numbers::pi * t / 5)});
  }
  CHECK(estimate_period(s) == doctest::Approx(5.0).epsilon(0.004));
  std::vector<TimeValue> flat;
  for (int i = 0; i < 100; ++i) flat.push_back({0.1 * i, 1.0});
  CHECK_THROWS_AS(estimate_period(flat), Error);
}

TEST_CASE("convergence study tabulates orders") {
  const ConvergenceTable t = convergence_study(2, 1, 0.001, 64, {0.04, 0.01, 0.02}, 0.5);
  REQUIRE(t.rows.size() == 3);
  CHECK(t.rows[0].dt == 0.01);
  CHECK(t.rows[2].dt == 0.04);
  CHECK(t.rows[0].order_u == doctest::Approx(2.0).epsilon(0.05));
  CHECK(std::isnan(t.rows[2].order_u));
}
