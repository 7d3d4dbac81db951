#include "wpvol/scalar.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

using namespace wpvol;

namespace {

// B_m from sum_{j=0}^{m} C(m+1, j) B_j = 0.
std::vector<Rational> bernoulli_table(int up_to) {
  std::vector<Rational> B(up_to + 1);
  B[0] = 1;
  for (int m = 1; m <= up_to; ++m) {
    Rational s = 0;
    for (int j = 0; j < m; ++j) {
      mpz_class c;
      mpz_bin_uiui(c.get_mpz_t(), m + 1, j);
      s += Rational(c) * B[j];
    }
    B[m] = -s / (m + 1);
  }
  return B;
}

}  // namespace

TEST_CASE("bernoulli numbers match the defining recurrence") {
  const auto B = bernoulli_table(30);
  CHECK(bernoulli(0) == 1);
  CHECK(bernoulli(2) == Rational(1, 6));
  CHECK(bernoulli(4) == Rational(-1, 30));
  for (int m = 0; m <= 30; m += 2) CHECK(bernoulli(m) == B[m]);
  CHECK_THROWS_AS(bernoulli(3), std::invalid_argument);
  CHECK_THROWS_AS(bernoulli(-2), std::invalid_argument);
}

TEST_CASE("a_coeff values and limit") {
  CHECK(a_coeff(-1).is_zero());
  CHECK(a_coeff(0) == Pi2Scalar(Rational(1, 2)));
  CHECK(a_coeff(1) == Pi2Scalar::monomial(1, Rational(1, 12)));
  CHECK(a_coeff(2) == Pi2Scalar::monomial(2, Rational(7, 720)));
  double prev = a_coeff(1).to_double();
  for (int n = 2; n <= 30; ++n) {
    const double v = a_coeff(n).to_double();
    CHECK(v >= prev);
    CHECK(v <= 1.0);
    prev = v;
  }
  CHECK(std::abs(a_coeff(30).to_double() - 1.0) < 1e-15);
}

TEST_CASE("pi^2 polynomial arithmetic") {
  const Pi2Scalar a = Pi2Scalar::monomial(1, Rational(1, 3)) + Pi2Scalar(Rational(2));
  const Pi2Scalar b = Pi2Scalar::monomial(2, Rational(3, 4));
  const Pi2Scalar p = a * b;
  CHECK(p.coefficient(3) == Rational(1, 4));
  CHECK(p.coefficient(2) == Rational(3, 2));
  CHECK(p.coefficient(0) == 0);
  CHECK((a - a).is_zero());
  CHECK(b.is_homogeneous(2));
  CHECK_FALSE(a.is_homogeneous(1));
  CHECK(b.homogeneous_degree() == 2);
  CHECK_THROWS(a.homogeneous_degree());
  CHECK(b.shifted(-2) == Pi2Scalar(Rational(3, 4)));
  CHECK_THROWS(a.shifted(-1));

  Pi2Scalar acc;
  acc.add_product(Rational(2), a, b);
  CHECK(acc == p * Rational(2));
  CHECK(Pi2Scalar::from_json(p.to_json()) == p);
  CHECK(Pi2Scalar(Rational(1, 2)).to_string() == "1/2");
  CHECK(Pi2Scalar::monomial(3, Rational(43, 2160)).to_string() == "43/2160 · π^6");
}

TEST_CASE("interval enclosures are rigorous") {
  const Interval pi = Interval::pi();
  CHECK(pi.lower() <= std::numbers::pi);
  CHECK(pi.upper() >= std::numbers::pi);
  CHECK(pi.radius() < 1e-30);

  const Interval third(Rational(1, 3));
  const Interval back = third * Interval(Rational(3));
  CHECK(back.lower() <= 1.0);
  CHECK(back.upper() >= 1.0);
  CHECK(certainly_less(Interval(Rational(1, 3)), Interval(Rational(1, 2))));
  CHECK_FALSE(certainly_less(third, third));
  CHECK_THROWS_AS(Interval(-1.0).log(), std::domain_error);

  const Pi2Scalar v = Pi2Scalar::monomial(3, Rational(43, 2160));
  const Approx a = v.to_float();
  CHECK(a.value == doctest::Approx(43.0 / 2160.0 * std::pow(std::numbers::pi, 6)).epsilon(1e-15));
  CHECK(a.error < 1e-15 * a.value);
}

TEST_CASE("parse_rational accepts fractions and decimals exactly") {
  CHECK(parse_rational("3/4") == Rational(3, 4));
  CHECK(parse_rational("-7") == Rational(-7));
  CHECK(parse_rational("2.5") == Rational(5, 2));
  CHECK(parse_rational("1e-3") == Rational(1, 1000));
  CHECK(parse_rational("0.01") == Rational(1, 100));
  CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
  CHECK(to_string(parse_rational("-6/4")) == "-3/2");
}

TEST_CASE("working precision is configurable and bounded") {
  const mpfr_prec_t old = working_precision();
  set_working_precision(256);
  CHECK(Interval::pi().precision() == 256);
  set_working_precision(old);
  CHECK(working_precision() == old);
  CHECK_THROWS_AS(set_working_precision(16), std::invalid_argument);
  CHECK_THROWS_AS(set_working_precision(10000), std::invalid_argument);
}

TEST_CASE("factorial and binomial") {
  CHECK(factorial(0) == 1);
  CHECK(factorial(10) == 3628800);
  CHECK(binomial(10, 3) == 120);
  CHECK(binomial(3, 5) == 0);
}
