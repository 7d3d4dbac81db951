#include "wpvol/geodesics.hpp"

#include "wpvol/quadrature.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace wpvol {

LiResult li_with_error(double t, double tol) {
  if (!(t > 2.0)) return {};
  // x = e^u turns the integrand into e^u / u on [ln 2, ln t].
  const auto f = [](double u) { return std::exp(u) / u; };
  const QuadResult q = integrate(f, std::log(2.0), std::log(t), tol);
  return {q.value, q.error};
}

double li(double t, double tol) { return li_with_error(t, tol).value; }

Rational quantize_length(double L, long denominator) {
  if (!std::isfinite(L)) throw std::invalid_argument("quantize_length: non-finite length");
  if (denominator <= 0) throw std::invalid_argument("quantize_length: denominator must be positive");
  const double scaled = std::round(L * static_cast<double>(denominator));
  Rational q(Integer(static_cast<long>(scaled)), Integer(denominator));
  q.canonicalize();
  return q;
}

Rational quantize_length(const std::string& L, long denominator) {
  if (denominator <= 0) throw std::invalid_argument("quantize_length: denominator must be positive");
  const Rational exact = parse_rational(L);
  // round(exact * den) with ties away from zero, in exact arithmetic
  Rational scaled = exact * Rational(denominator);
  Integer num = scaled.get_num();
  const Integer den = scaled.get_den();
  Integer twice = 2 * num + (num >= 0 ? den : Integer(-den));
  Integer rounded;
  mpz_tdiv_q(rounded.get_mpz_t(), twice.get_mpz_t(), Integer(2 * den).get_mpz_t());
  Rational q(rounded, Integer(denominator));
  q.canonicalize();
  return q;
}

Interval ExactRatio::enclose(mpfr_prec_t prec) const {
  Interval v = num.enclose(prec);
  if (den_degree != 0) {
    const Interval p = Interval::pi(prec).pow(2 * static_cast<unsigned long>(den_degree));
    v /= p;
  }
  return v;
}

std::string ExactRatio::to_string() const {
  if (den_degree == 0 || num.is_zero()) return num.to_string();
  return "(" + num.to_string() + ") · π^-" + std::to_string(2 * den_degree);
}

ExactRatio divide_by(const Pi2Scalar& num, const Pi2Scalar& v) {
  const int deg = v.homogeneous_degree();
  if (deg < 0) throw std::domain_error("divide_by: zero denominator");
  ExactRatio r;
  r.num = num * (Rational(1) / v.coefficient(deg));
  r.den_degree = deg;
  return r;
}

ExpectationEngine::ExpectationEngine(const IntersectionEngine& engine) : engine_(engine) {}

const VolumePolynomial& ExpectationEngine::poly(int g, int n) {
  std::lock_guard lock(mutex_);
  auto it = polys_.find({g, n});
  if (it == polys_.end()) it = polys_.emplace(std::make_pair(g, n), volume_polynomial(engine_, g, n)).first;
  return it->second;
}

ExpectationEngine::PerGenus& ExpectationEngine::slot(int g) {
  std::lock_guard lock(mutex_);
  return genus_[g];
}

const Pi2Scalar& ExpectationEngine::closed(int g) {
  std::lock_guard lock(mutex_);
  PerGenus& s = slot(g);
  if (!s.vg) s.vg = closed_volume(engine_, g);
  return *s.vg;
}

const LPolynomial& ExpectationEngine::nsep_moment(int g) {
  if (g < 2) throw std::invalid_argument("expected_nsep: g must be at least 2");
  std::lock_guard lock(mutex_);
  PerGenus& s = slot(g);
  if (!s.nsep) {
    LPolynomial m = diagonal_moment_poly(poly(g - 1, 2), Diagonal1D{});
    m *= Rational(1, 2);
    s.nsep = std::move(m);
  }
  return *s.nsep;
}

ExactRatio ExpectationEngine::expected_nsep(int g, const Rational& L) {
  if (L < 0) throw std::invalid_argument("expected_nsep: L must be nonnegative");
  return divide_by(nsep_moment(g).at(L), closed(g));
}

SepTotal ExpectationEngine::expected_sep_total(int g, const Rational& L) {
  if (g < 2) throw std::invalid_argument("expected_sep_total: g must be at least 2");
  if (L < 0) throw std::invalid_argument("expected_sep_total: L must be nonnegative");
  std::lock_guard lock(mutex_);
  PerGenus& s = slot(g);
  if (!s.sep_upper) {
    LPolynomial upper;
    LPolynomial exact;
    for (int i = 1; 2 * i <= g; ++i) {
      const VolumePolynomial& a = poly(g - i, 1);
      const VolumePolynomial& b = poly(i, 1);
      // V_{g-i,1}(x) V_{i,1}(x) x dx
      LPolynomial m;
      for (const auto& [d1, c1] : a.coeffs()) {
        for (const auto& [d2, c2] : b.coeffs()) {
          const int k = d1[0] + d2[0];
          Pi2Scalar t;
          t.add_product(Rational(1, 2 * k + 2), c1, c2);
          m.add(2 * k + 2, t);
        }
      }
      upper += m;
      LPolynomial half = m;
      half *= (2 * i == g) ? Rational(1, 4) : Rational(1, 2);
      exact += half;
    }
    s.sep_upper = std::move(upper);
    s.sep_exactconst = std::move(exact);
  }
  const Pi2Scalar& vg = closed(g);
  return {divide_by(s.sep_upper->at(L), vg), divide_by(s.sep_exactconst->at(L), vg)};
}

VarianceTerms ExpectationEngine::variance_terms(int g, const Rational& L) {
  if (g < 2) throw std::invalid_argument("variance_terms: g must be at least 2");
  if (L < 0) throw std::invalid_argument("variance_terms: L must be nonnegative");
  std::lock_guard lock(mutex_);
  PerGenus& s = slot(g);
  if (!s.y1) {
    LPolynomial y1 = diagonal_moment_poly(poly(g - 2, 4), Diagonal2D{{0, 0, 1, 1}});
    y1 *= Rational(1, 4);
    s.y1 = std::move(y1);
    LPolynomial y2;
    for (int k = 1; 2 * k <= g - 1; ++k) {
      const VolumePolynomial& other = poly(g - k - 1, 2);
      y2 += diagonal_moment_poly(poly(k, 2), DiagonalProduct{&other});
    }
    s.y2 = std::move(y2);
  }
  const Pi2Scalar& vg = closed(g);
  return {divide_by(s.y1->at(L), vg), divide_by(s.y2->at(L), vg)};
}

ChebyshevResult ExpectationEngine::chebyshev_bound(int g, const Rational& L, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("chebyshev_bound: eps must lie in (0, 1)");
  if (g < 3) throw std::invalid_argument("chebyshev_bound: g must be at least 3");
  const mpfr_prec_t prec = working_precision();
  const Interval e = expected_nsep(g, L).enclose(prec);
  if (!e.positive()) throw std::domain_error("chebyshev_bound: expectation vanishes (L = 0)");
  const VarianceTerms v = variance_terms(g, L);
  const Interval e2 = e * e;
  Interval numer = e + v.y1.enclose(prec) + v.y2_upper.enclose(prec) - e2;
  ChebyshevResult r;
  if (mpfr_sgn(numer.hi()) < 0) {
    r.clamped = true;
    return r;
  }
  const Interval eps_i(eps, prec);
  const Interval val = Interval(Rational(4), prec) / (eps_i * eps_i) * numer / e2;
  r.value = std::max(0.0, val.mid());
  return r;
}

ExpectationRecord ExpectationEngine::record(int g, const Rational& L) {
  ExpectationRecord r;
  r.g = g;
  r.L = L;
  r.e_nsep = expected_nsep(g, L);
  const SepTotal s = expected_sep_total(g, L);
  r.e_sep_upper = s.upper;
  r.e_sep_exactconst = s.exactconst;
  const VarianceTerms v = variance_terms(g, L);
  r.y1 = v.y1;
  r.y2_upper = v.y2_upper;
  r.li_half = li(std::exp(L.get_d())) / 2.0;
  return r;
}

std::vector<CrossoverRow> ExpectationEngine::crossover_table(int g, const std::vector<Rational>& Lgrid) {
  std::vector<CrossoverRow> rows;
  for (std::size_t i = 0; i < Lgrid.size(); ++i) {
    if (i > 0 && !(Lgrid[i - 1] < Lgrid[i])) throw std::invalid_argument("crossover_table: L grid must be ascending");
    CrossoverRow row;
    row.L = Lgrid[i];
    row.e_nsep = expected_nsep(g, row.L);
    row.li_half = li(std::exp(row.L.get_d())) / 2.0;
    const double e = row.e_nsep.to_double();
    row.ratio = row.li_half > 0 ? e / row.li_half : std::numeric_limits<double>::infinity();
    const double sep = expected_sep_total(g, row.L).upper.to_double();
    row.sep_fraction = e > 0 ? sep / e : 0.0;
    rows.push_back(std::move(row));
  }
  return rows;
}

Table crossover_report(int g, const std::vector<CrossoverRow>& rows) {
  Table t;
  t.columns = {"g", "L", "L_float", "e_nsep_exact", "e_nsep", "li_half", "ratio", "sep_fraction"};
  for (const auto& r : rows) {
    t.add_row({std::to_string(g), to_string(r.L), format_double(r.L.get_d()), r.e_nsep.to_string(),
               format_double(r.e_nsep.to_double()), format_double(r.li_half), format_double(r.ratio),
               format_double(r.sep_fraction)});
  }
  return t;
}

}  // namespace wpvol
