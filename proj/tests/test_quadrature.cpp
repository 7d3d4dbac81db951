#include "wpvol/quadrature.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

using namespace wpvol;

TEST_CASE("finite intervals") {
  const QuadResult a = integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, 1e-12);
  CHECK(a.value == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(a.error <= 1e-12);
  const QuadResult b = integrate([](double x) { return std::exp(-x * x); }, -6.0, 6.0, 1e-12);
  CHECK(b.value == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-13));
  const QuadResult c = integrate([](double x) { return std::cos(40.0 * x); }, 0.0, 10.0, 1e-12, 8);
  CHECK(c.value == doctest::Approx(std::sin(400.0) / 40.0).epsilon(1e-10));
  CHECK(integrate([](double) { return 1.0; }, 2.0, 2.0, 1e-12).value == 0.0);
}

TEST_CASE("kinks and endpoint singularities") {
  const QuadResult a = integrate([](double x) { return std::abs(x - 0.3); }, 0.0, 1.0, 1e-12);
  CHECK(std::abs(a.value - 0.29) < 1e-11);
  const QuadResult b = integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-8);
  CHECK(b.value == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("infinite upper limit") {
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(integrate([](double x) { return std::exp(-x); }, 0.0, inf, 1e-12).value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(integrate([](double x) { return 1.0 / (1.0 + x * x); }, 0.0, inf, 1e-10).value ==
        doctest::Approx(std::numbers::pi / 2).epsilon(1e-10));
}

TEST_CASE("unreachable tolerance is reported") {
  CHECK_THROWS_AS(integrate([](double x) { return std::sin(1.0 / x); }, 1e-12, 1.0, 1e-15), ToleranceError);
}

TEST_CASE("compensated summation") {
  CompensatedSum s;
  s.add(1.0);
  for (int i = 0; i < 1000; ++i) s.add(1e-16);
  s.add(-1.0);
  CHECK(s.value() == doctest::Approx(1e-13).epsilon(1e-10));
}
