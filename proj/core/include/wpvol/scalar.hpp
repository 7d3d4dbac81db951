#pragma once

// Exact arithmetic in Q[pi^2] plus outward-rounded interval evaluation.

#include <gmpxx.h>
#include <mpfr.h>

#include <nlohmann/json.hpp>

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace wpvol {

using Rational = mpq_class;
using Integer = mpz_class;

inline constexpr mpfr_prec_t kDefaultPrecision = 128;

// Process-wide default for enclosures; starts at kDefaultPrecision.
mpfr_prec_t working_precision();
// Throws std::invalid_argument outside [53, 4096].
void set_working_precision(mpfr_prec_t bits);

// Parses "p/q", "p" or a plain decimal string ("2.5", "1e-3") exactly.
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& q);

/// Closed interval [lo, hi] with MPFR endpoints. Every operation rounds
/// the lower endpoint down and the upper endpoint up, so the true value of
/// any expression built from exact inputs is always enclosed.
class Interval {
 public:
  explicit Interval(mpfr_prec_t prec = working_precision());
  Interval(const Rational& q, mpfr_prec_t prec = working_precision());
  Interval(double x, mpfr_prec_t prec = working_precision());
  static Interval hull(double lo, double hi, mpfr_prec_t prec = working_precision());
  static Interval pi(mpfr_prec_t prec = working_precision());

  Interval(const Interval& other);
  Interval(Interval&& other) noexcept;
  Interval& operator=(const Interval& other);
  Interval& operator=(Interval&& other) noexcept;
  ~Interval();

  mpfr_prec_t precision() const { return prec_; }
  double lower() const;  // rounded down to double
  double upper() const;  // rounded up to double
  double mid() const;
  double radius() const;  // upper bound on half the width
  bool contains_zero() const;
  bool positive() const;  // certainly > 0

  Interval& operator+=(const Interval& o);
  Interval& operator-=(const Interval& o);
  Interval& operator*=(const Interval& o);
  Interval& operator/=(const Interval& o);  // o must not contain zero

  friend Interval operator+(Interval a, const Interval& b) { return a += b; }
  friend Interval operator-(Interval a, const Interval& b) { return a -= b; }
  friend Interval operator*(Interval a, const Interval& b) { return a *= b; }
  friend Interval operator/(Interval a, const Interval& b) { return a /= b; }
  Interval operator-() const;

  Interval pow(unsigned long k) const;
  // Monotone elementary functions; domain errors throw std::domain_error.
  Interval exp() const;
  Interval log() const;
  Interval sqrt() const;
  Interval sinh() const;  // monotone on all of R
  Interval cosh() const;

  // Certain comparisons: true only when the intervals separate.
  friend bool certainly_less(const Interval& a, const Interval& b);
  friend bool certainly_leq(const Interval& a, const Interval& b);

  const mpfr_t& lo() const { return lo_; }
  const mpfr_t& hi() const { return hi_; }

 private:
  mpfr_prec_t prec_;
  mpfr_t lo_;
  mpfr_t hi_;
};

bool certainly_less(const Interval& a, const Interval& b);
bool certainly_leq(const Interval& a, const Interval& b);

// Float view of an exact value together with a rigorous error bound.
struct Approx {
  double value = 0.0;
  double error = 0.0;
};

/// Element of Q[pi^2]: sum_k q_k pi^{2k}. Terms are kept sorted by degree
/// and zero coefficients are never stored, so the empty vector is zero.
class Pi2Scalar {
 public:
  using Term = std::pair<int, Rational>;

  Pi2Scalar() = default;
  Pi2Scalar(const Rational& q);  // degree-0 constant
  Pi2Scalar(long q) : Pi2Scalar(Rational(q)) {}
  static Pi2Scalar monomial(int degree, const Rational& q);

  bool is_zero() const { return terms_.empty(); }
  bool is_homogeneous(int degree) const;
  // Degree of the single term; -1 for zero; throws if not homogeneous.
  int homogeneous_degree() const;
  const std::vector<Term>& terms() const { return terms_; }
  Rational coefficient(int degree) const;

  Pi2Scalar& operator+=(const Pi2Scalar& o);
  Pi2Scalar& operator-=(const Pi2Scalar& o);
  Pi2Scalar& operator*=(const Pi2Scalar& o);
  Pi2Scalar& operator*=(const Rational& q);
  // Adds c * a * b without temporaries (the hot path of the recursion).
  void add_product(const Rational& c, const Pi2Scalar& a, const Pi2Scalar& b);
  void add_scaled(const Rational& c, const Pi2Scalar& a);

  friend Pi2Scalar operator+(Pi2Scalar a, const Pi2Scalar& b) { return a += b; }
  friend Pi2Scalar operator-(Pi2Scalar a, const Pi2Scalar& b) { return a -= b; }
  friend Pi2Scalar operator*(Pi2Scalar a, const Pi2Scalar& b) { return a *= b; }
  friend Pi2Scalar operator*(Pi2Scalar a, const Rational& q) { return a *= q; }
  Pi2Scalar operator-() const;
  bool operator==(const Pi2Scalar& o) const;
  bool operator!=(const Pi2Scalar& o) const { return !(*this == o); }

  // Multiplies by pi^{2 shift}; a negative shift requires every degree to
  // stay nonnegative.
  Pi2Scalar shifted(int shift) const;

  Interval enclose(mpfr_prec_t prec = working_precision()) const;
  Approx to_float(mpfr_prec_t prec = working_precision()) const;
  double to_double() const { return to_float().value; }

  // "num/den · π^{2k}" terms joined by " + ".
  std::string to_string() const;
  nlohmann::json to_json() const;
  static Pi2Scalar from_json(const nlohmann::json& j);

 private:
  void normalize();
  std::vector<Term> terms_;
};

/// Bernoulli number B_m for even m >= 0.
Rational bernoulli(int m);

/// Recursion coefficient: 0 for L < 0, 1/2 for L = 0, and
/// zeta(2L)(1 - 2^{1-2L}) as q * pi^{2L} for L >= 1.
Pi2Scalar a_coeff(int L);

// Rational part of a_coeff(L), i.e. a_coeff(L) = a_rational(L) * pi^{2L}.
const Rational& a_rational(int L);

Integer factorial(unsigned n);
Integer binomial(unsigned n, unsigned k);

}  // namespace wpvol
