#pragma once

// Weil-Petersson volume polynomials, closed volumes and exact diagonal
// moment integrals.

#include "wpvol/intersect.hpp"

#include <map>
#include <span>
#include <variant>
#include <vector>

namespace wpvol {

/// V_{g,n}(x_1..x_n) as a polynomial in the x_i^2. coeff(d) multiplies
/// prod x_i^{2 d_i}; every ordered exponent vector is stored.
class VolumePolynomial {
 public:
  using Coeffs = std::map<std::vector<int>, Pi2Scalar>;

  VolumePolynomial() = default;
  VolumePolynomial(int g, int n, Coeffs coeffs);

  int g() const { return g_; }
  int n() const { return n_; }
  const Coeffs& coeffs() const { return coeffs_; }
  Pi2Scalar coeff(std::span<const int> d) const;  // zero when absent
  Pi2Scalar constant_term() const;
  // Largest total degree in the x_i^2, i.e. 3g-3+n.
  int degree() const { return 3 * g_ - 3 + n_; }

  nlohmann::json to_json() const;
  static VolumePolynomial from_json(const nlohmann::json& j);

  friend bool operator==(const VolumePolynomial&, const VolumePolynomial&) = default;

 private:
  int g_ = 0;
  int n_ = 0;
  Coeffs coeffs_;
};

Pi2Scalar volume(const IntersectionEngine& engine, int g, int n);

// V_g from V_{g,1} via the dilaton relation; g >= 2.
Pi2Scalar closed_volume(const IntersectionEngine& engine, int g);

// V_{g,n} for n >= 1, closed_volume for n = 0.
Pi2Scalar volume_any(const IntersectionEngine& engine, int g, int n);

VolumePolynomial volume_polynomial(const IntersectionEngine& engine, int g, int n);

/// Pre-encloses every coefficient once so repeated evaluation is cheap.
class PolynomialEvaluator {
 public:
  explicit PolynomialEvaluator(const VolumePolynomial& p, mpfr_prec_t prec = working_precision());
  // Throws std::invalid_argument on a length mismatch or a negative x_i.
  Interval operator()(std::span<const double> x) const;
  mpfr_prec_t precision() const { return prec_; }

 private:
  mpfr_prec_t prec_;
  int n_;
  std::vector<std::pair<std::vector<int>, Interval>> terms_;
};

Interval eval_poly_interval(const VolumePolynomial& p, std::span<const double> x,
                            mpfr_prec_t prec = working_precision());
double eval_poly(const VolumePolynomial& p, std::span<const double> x, mpfr_prec_t prec = working_precision());

/// Polynomial in L with coefficients in Q[pi^2].
class LPolynomial {
 public:
  std::map<int, Pi2Scalar>& terms() { return terms_; }
  const std::map<int, Pi2Scalar>& terms() const { return terms_; }
  void add(int power, const Pi2Scalar& c);
  LPolynomial& operator*=(const Rational& q);
  LPolynomial& operator+=(const LPolynomial& o);
  Pi2Scalar at(const Rational& L) const;
  std::string to_string() const;

 private:
  std::map<int, Pi2Scalar> terms_;
};

// Every variable tied to x with weight x dx on [0, L].
struct Diagonal1D {};
// Slot i is tied to x when groups[i] == 0 and to y when groups[i] == 1;
// weight xy dx dy on [0, L]^2.
struct Diagonal2D {
  std::vector<int> groups;
};
// p(x, y) q(x, y) xy dx dy on [0, L]^2 with p, q of type (., 2).
struct DiagonalProduct {
  const VolumePolynomial* other = nullptr;
};
using DiagonalPattern = std::variant<Diagonal1D, Diagonal2D, DiagonalProduct>;

LPolynomial diagonal_moment_poly(const VolumePolynomial& p, const DiagonalPattern& pattern);
Pi2Scalar diagonal_moment(const VolumePolynomial& p, const DiagonalPattern& pattern, const Rational& L);

}  // namespace wpvol
