#include "wpvol/volume.hpp"
#include "wk_oracle.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace wpvol;

namespace {

void exponent_vectors(int n, int total, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == n) {
    out.push_back(cur);
    return;
  }
  for (int x = 0; x <= total; ++x) {
    cur.push_back(x);
    exponent_vectors(n, total - x, cur, out);
    cur.pop_back();
  }
}

Pi2Scalar pi2(int k, Rational q) { return Pi2Scalar::monomial(k, q); }

}  // namespace

TEST_CASE("landmark volumes") {
  const IntersectionEngine e;
  CHECK(volume(e, 0, 3) == Pi2Scalar(Rational(1)));
  CHECK(volume(e, 1, 1) == pi2(1, Rational(1, 12)));
  CHECK(volume(e, 1, 2) == pi2(2, Rational(1, 4)));
  CHECK(volume(e, 0, 4) == pi2(1, Rational(2)));
  CHECK(volume(e, 0, 5) == pi2(2, Rational(10)));
  CHECK(volume(e, 2, 1) == pi2(4, Rational(29, 192)));
  CHECK(closed_volume(e, 2) == pi2(3, Rational(43, 2160)));
  CHECK(closed_volume(e, 3) == pi2(6, Rational(176557, 1209600)));
  CHECK(closed_volume(e, 4) == pi2(9, Rational("1959225867017/493807104000")));
  CHECK(volume_any(e, 3, 0) == closed_volume(e, 3));
  CHECK_THROWS_AS(closed_volume(e, 1), std::invalid_argument);
  for (int g = 2; g <= 8; ++g) CHECK(closed_volume(e, g).to_double() > 0.0);
}

TEST_CASE("volume polynomials agree with the kappa-class oracle") {
  const IntersectionEngine e;
  oracle::KappaIntegrals kappa;
  for (int g = 0; g <= 2; ++g) {
    for (int n = 1; n <= 4; ++n) {
      if (2 * g - 2 + n <= 0 || 3 * g - 3 + n > 6) continue;
      const VolumePolynomial p = volume_polynomial(e, g, n);
      CHECK(p.degree() == 3 * g - 3 + n);
      std::vector<std::vector<int>> ds;
      std::vector<int> cur;
      exponent_vectors(n, 3 * g - 3 + n, cur, ds);
      for (const auto& d : ds) {
        const auto [m, q] = oracle::volume_coefficient(kappa, g, d);
        CAPTURE(g);
        CAPTURE(n);
        CHECK(p.coeff(d) == pi2(m, q));
      }
    }
  }
}

TEST_CASE("closed volumes agree with kappa_1 top powers") {
  const IntersectionEngine e;
  oracle::KappaIntegrals kappa;
  for (int g = 2; g <= 3; ++g) {
    const auto [m, q] = oracle::volume_coefficient(kappa, g, {});
    CHECK(m == 3 * g - 3);
    CHECK(closed_volume(e, g) == pi2(m, q));
  }
}

TEST_CASE("volume polynomial of type (1,1)") {
  const IntersectionEngine e;
  const VolumePolynomial p = volume_polynomial(e, 1, 1);
  const std::vector<int> d0{0};
  const std::vector<int> d1{1};
  CHECK(p.coeff(d0) == pi2(1, Rational(1, 12)));
  CHECK(p.coeff(d1) == Pi2Scalar(Rational(1, 48)));
  CHECK(p.coeffs().size() == 2);
  CHECK(volume_polynomial(e, 0, 3).coeffs().size() == 1);
  CHECK(volume_polynomial(e, 2, 1).constant_term() == volume(e, 2, 1));
  CHECK(VolumePolynomial::from_json(p.to_json()) == p);

  const std::vector<double> x0{0.0};
  const std::vector<double> x2{2.0};
  const double pi2v = std::numbers::pi * std::numbers::pi;
  CHECK(eval_poly(p, x0) == doctest::Approx(pi2v / 12).epsilon(1e-15));
  CHECK(eval_poly(p, x2) == doctest::Approx((4 + 4 * pi2v) / 48).epsilon(1e-15));
  const std::vector<double> neg{-1.0};
  CHECK_THROWS_AS(eval_poly(p, neg), std::invalid_argument);
  const std::vector<double> two{1.0, 1.0};
  CHECK_THROWS_AS(eval_poly(p, two), std::invalid_argument);

  const PolynomialEvaluator ev(volume_polynomial(e, 1, 2));
  const std::vector<double> xy{1.5, 2.5};
  const double x = 1.5, y = 2.5;
  const double expect = (4 * pi2v + x * x + y * y) * (12 * pi2v + x * x + y * y) / 192;
  const Interval v = ev(xy);
  CHECK(v.lower() <= expect * (1 + 1e-14));
  CHECK(v.upper() >= expect * (1 - 1e-14));
}

TEST_CASE("diagonal moments") {
  const IntersectionEngine e;
  const Rational L(3, 2);
  CHECK(diagonal_moment(volume_polynomial(e, 0, 3), Diagonal1D{}, L) == Pi2Scalar(L * L / 2));

  const Pi2Scalar m = diagonal_moment(volume_polynomial(e, 1, 1), Diagonal1D{}, L);
  const Rational L2 = L * L;
  CHECK(m == pi2(1, L2 / 24) + Pi2Scalar(L2 * L2 / 192));

  const Pi2Scalar c = diagonal_moment(volume_polynomial(e, 0, 3), Diagonal2D{{0, 0, 1}}, L);
  CHECK(c == Pi2Scalar(L2 * L2 / 4));

  const LPolynomial lp = diagonal_moment_poly(volume_polynomial(e, 1, 1), Diagonal1D{});
  CHECK(lp.at(L) == m);
  CHECK(lp.at(Rational(0)).is_zero());
}
