#pragma once

// Expected counts of simple closed geodesics over moduli space through the
// integration formula, variance terms, Chebyshev bounds and Li.

#include "wpvol/report.hpp"
#include "wpvol/volume.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>

namespace wpvol {

struct LiResult {
  double value = 0.0;
  double error = 0.0;  // quadrature error estimate
};

// Li(t) = int_2^t dx / ln x, 0 for t <= 2. tol is an absolute target.
LiResult li_with_error(double t, double tol = 1e-10);
double li(double t, double tol = 1e-10);

// Nearest rational with the given denominator (ties away from zero).
Rational quantize_length(double L, long denominator = 100);
Rational quantize_length(const std::string& L, long denominator = 100);

/// num * pi^{-2 den_degree}: quotients of Q[pi^2] elements by a volume.
struct ExactRatio {
  Pi2Scalar num;
  int den_degree = 0;

  Interval enclose(mpfr_prec_t prec = working_precision()) const;
  double to_double() const { return enclose().mid(); }
  std::string to_string() const;
  bool is_zero() const { return num.is_zero(); }
};

// num / v for a homogeneous nonzero v.
ExactRatio divide_by(const Pi2Scalar& num, const Pi2Scalar& v);

struct SepTotal {
  ExactRatio upper;       // no C_Gamma
  ExactRatio exactconst;  // 1/2 per term, 1/4 at i = g/2
};

struct VarianceTerms {
  ExactRatio y1;
  ExactRatio y2_upper;  // zero for g < 3
};

struct ChebyshevResult {
  double value = 0.0;
  bool z_omitted = true;
  bool clamped = false;  // numerator was negative and set to 0
};

struct ExpectationRecord {
  int g = 0;
  Rational L;
  ExactRatio e_nsep;
  ExactRatio e_sep_upper;
  ExactRatio e_sep_exactconst;
  ExactRatio y1;
  ExactRatio y2_upper;
  double li_half = 0.0;  // Li(e^L) / 2
};

struct CrossoverRow {
  Rational L;
  ExactRatio e_nsep;
  double li_half = 0.0;
  double ratio = 0.0;         // e_nsep / li_half
  double sep_fraction = 0.0;  // e_sep_upper / e_nsep
};

/// Memoizes the L-polynomials of every moment integral so that sweeps in
/// L reduce to exact substitution.
class ExpectationEngine {
 public:
  explicit ExpectationEngine(const IntersectionEngine& engine);

  ExactRatio expected_nsep(int g, const Rational& L);
  SepTotal expected_sep_total(int g, const Rational& L);
  VarianceTerms variance_terms(int g, const Rational& L);
  ChebyshevResult chebyshev_bound(int g, const Rational& L, double eps);
  ExpectationRecord record(int g, const Rational& L);
  std::vector<CrossoverRow> crossover_table(int g, const std::vector<Rational>& Lgrid);

  // (1/2) int_0^L V_{g-1,2}(x,x) x dx, before division by V_g.
  const LPolynomial& nsep_moment(int g);
  const Pi2Scalar& closed(int g);

 private:
  struct PerGenus {
    std::optional<LPolynomial> nsep;
    std::optional<LPolynomial> sep_upper;
    std::optional<LPolynomial> sep_exactconst;
    std::optional<LPolynomial> y1;
    std::optional<LPolynomial> y2;
    std::optional<Pi2Scalar> vg;
  };
  const VolumePolynomial& poly(int g, int n);
  PerGenus& slot(int g);

  const IntersectionEngine& engine_;
  std::map<std::pair<int, int>, VolumePolynomial> polys_;
  std::map<int, PerGenus> genus_;
  std::recursive_mutex mutex_;
};

Table crossover_report(int g, const std::vector<CrossoverRow>& rows);

}  // namespace wpvol
