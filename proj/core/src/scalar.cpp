#include "wpvol/scalar.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <deque>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace wpvol {

namespace {
std::atomic<mpfr_prec_t> g_working_precision{kDefaultPrecision};
}  // namespace

mpfr_prec_t working_precision() { return g_working_precision.load(std::memory_order_relaxed); }

void set_working_precision(mpfr_prec_t bits) {
  if (bits < 53 || bits > 4096) throw std::invalid_argument("precision must lie in [53, 4096] bits");
  g_working_precision.store(bits, std::memory_order_relaxed);
}

Rational parse_rational(const std::string& text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  if (s.find('/') != std::string::npos) {
    Rational q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational literal: " + text);
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + text);
    q.canonicalize();
    return q;
  }
  // Decimal: [sign] digits [. digits] [e|E [sign] digits]
  std::size_t pos = 0;
  bool negative = false;
  if (s[pos] == '+' || s[pos] == '-') negative = s[pos++] == '-';
  std::string digits;
  long exponent = 0;
  bool any_digit = false;
  while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
    digits.push_back(s[pos++]);
    any_digit = true;
  }
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      digits.push_back(s[pos++]);
      --exponent;
      any_digit = true;
    }
  }
  if (!any_digit) throw std::invalid_argument("bad decimal literal: " + text);
  if (pos < s.size() && (s[pos] == 'e' || s[pos] == 'E')) {
    ++pos;
    std::size_t used = 0;
    long e = 0;
    try {
      e = std::stol(s.substr(pos), &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad exponent in: " + text);
    }
    pos += used;
    exponent += e;
  }
  if (pos != s.size()) throw std::invalid_argument("trailing characters in: " + text);
  Integer num(digits, 10);
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
  Rational q = exponent >= 0 ? Rational(num * scale) : Rational(num, scale);
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

std::string to_string(const Rational& q) { return q.get_str(10); }

// ---------------------------------------------------------------------------
// Interval

Interval::Interval(mpfr_prec_t prec) : prec_(prec) {
  mpfr_init2(lo_, prec_);
  mpfr_init2(hi_, prec_);
  mpfr_set_zero(lo_, 1);
  mpfr_set_zero(hi_, 1);
}

Interval::Interval(const Rational& q, mpfr_prec_t prec) : prec_(prec) {
  mpfr_init2(lo_, prec_);
  mpfr_init2(hi_, prec_);
  mpfr_set_q(lo_, q.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(hi_, q.get_mpq_t(), MPFR_RNDU);
}

Interval::Interval(double x, mpfr_prec_t prec) : prec_(std::max<mpfr_prec_t>(prec, 53)) {
  if (!std::isfinite(x)) throw std::domain_error("non-finite interval endpoint");
  mpfr_init2(lo_, prec_);
  mpfr_init2(hi_, prec_);
  mpfr_set_d(lo_, x, MPFR_RNDD);
  mpfr_set_d(hi_, x, MPFR_RNDU);
}

Interval Interval::hull(double lo, double hi, mpfr_prec_t prec) {
  if (lo > hi) std::swap(lo, hi);
  Interval r(lo, prec);
  mpfr_set_d(r.hi_, hi, MPFR_RNDU);
  return r;
}

Interval Interval::pi(mpfr_prec_t prec) {
  Interval r(prec);
  mpfr_const_pi(r.lo_, MPFR_RNDD);
  mpfr_const_pi(r.hi_, MPFR_RNDU);
  return r;
}

Interval::Interval(const Interval& other) : prec_(other.prec_) {
  mpfr_init2(lo_, prec_);
  mpfr_init2(hi_, prec_);
  mpfr_set(lo_, other.lo_, MPFR_RNDD);
  mpfr_set(hi_, other.hi_, MPFR_RNDU);
}

Interval::Interval(Interval&& other) noexcept : Interval(other) {}

Interval& Interval::operator=(const Interval& other) {
  if (this != &other) {
    prec_ = other.prec_;
    mpfr_set_prec(lo_, prec_);
    mpfr_set_prec(hi_, prec_);
    mpfr_set(lo_, other.lo_, MPFR_RNDD);
    mpfr_set(hi_, other.hi_, MPFR_RNDU);
  }
  return *this;
}

Interval& Interval::operator=(Interval&& other) noexcept {
  if (this != &other) {
    mpfr_swap(lo_, other.lo_);
    mpfr_swap(hi_, other.hi_);
    std::swap(prec_, other.prec_);
  }
  return *this;
}

Interval::~Interval() {
  mpfr_clear(lo_);
  mpfr_clear(hi_);
}

double Interval::lower() const { return mpfr_get_d(lo_, MPFR_RNDD); }
double Interval::upper() const { return mpfr_get_d(hi_, MPFR_RNDU); }

double Interval::mid() const {
  mpfr_t m;
  mpfr_init2(m, prec_ + 1);
  mpfr_add(m, lo_, hi_, MPFR_RNDN);
  mpfr_div_2ui(m, m, 1, MPFR_RNDN);
  double v = mpfr_get_d(m, MPFR_RNDN);
  mpfr_clear(m);
  return v;
}

double Interval::radius() const {
  mpfr_t w;
  mpfr_init2(w, prec_);
  mpfr_sub(w, hi_, lo_, MPFR_RNDU);
  mpfr_div_2ui(w, w, 1, MPFR_RNDU);
  double v = mpfr_get_d(w, MPFR_RNDU);
  mpfr_clear(w);
  return v;
}

bool Interval::contains_zero() const { return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0; }
bool Interval::positive() const { return mpfr_sgn(lo_) > 0; }

Interval& Interval::operator+=(const Interval& o) {
  mpfr_add(lo_, lo_, o.lo_, MPFR_RNDD);
  mpfr_add(hi_, hi_, o.hi_, MPFR_RNDU);
  return *this;
}

Interval& Interval::operator-=(const Interval& o) {
  Interval r(prec_);
  mpfr_sub(r.lo_, lo_, o.hi_, MPFR_RNDD);
  mpfr_sub(r.hi_, hi_, o.lo_, MPFR_RNDU);
  *this = std::move(r);
  return *this;
}

namespace {

using EndpointOp = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t);

// Min/max over the four endpoint combinations of a monotone-per-argument op.
void corner_bounds(mpfr_t out_lo, mpfr_t out_hi, const Interval& a, const Interval& b,
                   EndpointOp op, mpfr_prec_t prec) {
  mpfr_srcptr as[2] = {a.lo(), a.hi()};
  mpfr_srcptr bs[2] = {b.lo(), b.hi()};
  mpfr_t t;
  mpfr_init2(t, prec);
  bool first = true;
  for (auto x : as) {
    for (auto y : bs) {
      op(t, x, y, MPFR_RNDD);
      if (first || mpfr_cmp(t, out_lo) < 0) mpfr_set(out_lo, t, MPFR_RNDD);
      op(t, x, y, MPFR_RNDU);
      if (first || mpfr_cmp(t, out_hi) > 0) mpfr_set(out_hi, t, MPFR_RNDU);
      first = false;
    }
  }
  mpfr_clear(t);
}

}  // namespace

Interval& Interval::operator*=(const Interval& o) {
  if (mpfr_sgn(lo_) >= 0 && mpfr_sgn(o.lo_) >= 0) {
    mpfr_mul(lo_, lo_, o.lo_, MPFR_RNDD);
    mpfr_mul(hi_, hi_, o.hi_, MPFR_RNDU);
    return *this;
  }
  Interval r(prec_);
  corner_bounds(r.lo_, r.hi_, *this, o, &mpfr_mul, prec_);
  *this = std::move(r);
  return *this;
}

Interval& Interval::operator/=(const Interval& o) {
  if (o.contains_zero()) throw std::domain_error("interval division by a range containing zero");
  Interval r(prec_);
  corner_bounds(r.lo_, r.hi_, *this, o, &mpfr_div, prec_);
  *this = std::move(r);
  return *this;
}

Interval Interval::operator-() const {
  Interval r(prec_);
  mpfr_neg(r.lo_, hi_, MPFR_RNDD);
  mpfr_neg(r.hi_, lo_, MPFR_RNDU);
  return r;
}

Interval Interval::pow(unsigned long k) const {
  if (mpfr_sgn(lo_) >= 0) {
    Interval r(prec_);
    mpfr_pow_ui(r.lo_, lo_, k, MPFR_RNDD);
    mpfr_pow_ui(r.hi_, hi_, k, MPFR_RNDU);
    return r;
  }
  Interval result(Rational(1), prec_);
  Interval base(*this);
  while (k > 0) {
    if (k & 1UL) result *= base;
    k >>= 1;
    if (k > 0) base *= base;
  }
  return result;
}

Interval Interval::exp() const {
  Interval r(prec_);
  mpfr_exp(r.lo_, lo_, MPFR_RNDD);
  mpfr_exp(r.hi_, hi_, MPFR_RNDU);
  return r;
}

Interval Interval::log() const {
  if (mpfr_sgn(lo_) <= 0) throw std::domain_error("interval log of a nonpositive range");
  Interval r(prec_);
  mpfr_log(r.lo_, lo_, MPFR_RNDD);
  mpfr_log(r.hi_, hi_, MPFR_RNDU);
  return r;
}

Interval Interval::sqrt() const {
  if (mpfr_sgn(lo_) < 0) throw std::domain_error("interval sqrt of a negative range");
  Interval r(prec_);
  mpfr_sqrt(r.lo_, lo_, MPFR_RNDD);
  mpfr_sqrt(r.hi_, hi_, MPFR_RNDU);
  return r;
}

Interval Interval::sinh() const {
  Interval r(prec_);
  mpfr_sinh(r.lo_, lo_, MPFR_RNDD);
  mpfr_sinh(r.hi_, hi_, MPFR_RNDU);
  return r;
}

Interval Interval::cosh() const {
  Interval r(prec_);
  if (contains_zero()) {
    mpfr_set_ui(r.lo_, 1, MPFR_RNDD);
    mpfr_t a;
    mpfr_init2(a, prec_);
    mpfr_neg(a, lo_, MPFR_RNDU);
    if (mpfr_cmp(a, hi_) < 0) mpfr_set(a, hi_, MPFR_RNDU);
    mpfr_cosh(r.hi_, a, MPFR_RNDU);
    mpfr_clear(a);
  } else if (mpfr_sgn(lo_) > 0) {
    mpfr_cosh(r.lo_, lo_, MPFR_RNDD);
    mpfr_cosh(r.hi_, hi_, MPFR_RNDU);
  } else {
    mpfr_cosh(r.lo_, hi_, MPFR_RNDD);
    mpfr_cosh(r.hi_, lo_, MPFR_RNDU);
  }
  return r;
}

bool certainly_less(const Interval& a, const Interval& b) { return mpfr_less_p(a.hi_, b.lo_) != 0; }
bool certainly_leq(const Interval& a, const Interval& b) { return mpfr_lessequal_p(a.hi_, b.lo_) != 0; }

// ---------------------------------------------------------------------------
// Pi2Scalar

Pi2Scalar::Pi2Scalar(const Rational& q) {
  if (q != 0) terms_.emplace_back(0, q);
}

Pi2Scalar Pi2Scalar::monomial(int degree, const Rational& q) {
  if (degree < 0) throw std::invalid_argument("negative pi^2 degree");
  Pi2Scalar r;
  if (q != 0) r.terms_.emplace_back(degree, q);
  return r;
}

bool Pi2Scalar::is_homogeneous(int degree) const {
  return terms_.empty() || (terms_.size() == 1 && terms_.front().first == degree);
}

int Pi2Scalar::homogeneous_degree() const {
  if (terms_.empty()) return -1;
  if (terms_.size() != 1) throw std::logic_error("Pi2Scalar is not homogeneous");
  return terms_.front().first;
}

Rational Pi2Scalar::coefficient(int degree) const {
  for (const auto& [k, q] : terms_) {
    if (k == degree) return q;
  }
  return Rational(0);
}

void Pi2Scalar::normalize() {
  std::sort(terms_.begin(), terms_.end(),
            [](const Term& a, const Term& b) { return a.first < b.first; });
  std::vector<Term> merged;
  merged.reserve(terms_.size());
  for (auto& t : terms_) {
    if (!merged.empty() && merged.back().first == t.first) {
      merged.back().second += t.second;
    } else {
      merged.push_back(std::move(t));
    }
  }
  merged.erase(std::remove_if(merged.begin(), merged.end(),
                              [](const Term& t) { return t.second == 0; }),
               merged.end());
  terms_ = std::move(merged);
}

void Pi2Scalar::add_scaled(const Rational& c, const Pi2Scalar& a) {
  if (c == 0) return;
  for (const auto& [k, q] : a.terms_) {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), k,
                               [](const Term& t, int deg) { return t.first < deg; });
    if (it != terms_.end() && it->first == k) {
      mpq_class prod = c * q;
      it->second += prod;
      if (it->second == 0) terms_.erase(it);
    } else {
      terms_.insert(it, Term{k, c * q});
    }
  }
}

void Pi2Scalar::add_product(const Rational& c, const Pi2Scalar& a, const Pi2Scalar& b) {
  if (c == 0 || a.terms_.empty() || b.terms_.empty()) return;
  if (a.terms_.size() == 1 && b.terms_.size() == 1) {
    const int k = a.terms_[0].first + b.terms_[0].first;
    thread_local mpq_class prod;
    mpq_mul(prod.get_mpq_t(), a.terms_[0].second.get_mpq_t(), b.terms_[0].second.get_mpq_t());
    mpq_mul(prod.get_mpq_t(), prod.get_mpq_t(), c.get_mpq_t());
    auto it = std::lower_bound(terms_.begin(), terms_.end(), k,
                               [](const Term& t, int deg) { return t.first < deg; });
    if (it != terms_.end() && it->first == k) {
      it->second += prod;
      if (it->second == 0) terms_.erase(it);
    } else {
      terms_.insert(it, Term{k, prod});
    }
    return;
  }
  Pi2Scalar p = a * b;
  add_scaled(c, p);
}

Pi2Scalar& Pi2Scalar::operator+=(const Pi2Scalar& o) {
  add_scaled(Rational(1), o);
  return *this;
}

Pi2Scalar& Pi2Scalar::operator-=(const Pi2Scalar& o) {
  add_scaled(Rational(-1), o);
  return *this;
}

Pi2Scalar& Pi2Scalar::operator*=(const Pi2Scalar& o) {
  std::vector<Term> out;
  out.reserve(terms_.size() * o.terms_.size());
  for (const auto& [ka, qa] : terms_) {
    for (const auto& [kb, qb] : o.terms_) out.emplace_back(ka + kb, qa * qb);
  }
  terms_ = std::move(out);
  normalize();
  return *this;
}

Pi2Scalar& Pi2Scalar::operator*=(const Rational& q) {
  if (q == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.second *= q;
  return *this;
}

Pi2Scalar Pi2Scalar::operator-() const {
  Pi2Scalar r(*this);
  for (auto& t : r.terms_) t.second = -t.second;
  return r;
}

bool Pi2Scalar::operator==(const Pi2Scalar& o) const { return terms_ == o.terms_; }

Pi2Scalar Pi2Scalar::shifted(int shift) const {
  Pi2Scalar r(*this);
  for (auto& t : r.terms_) {
    t.first += shift;
    if (t.first < 0) throw std::domain_error("pi^2 shift produces a negative degree");
  }
  return r;
}

Interval Pi2Scalar::enclose(mpfr_prec_t prec) const {
  Interval sum(prec);
  if (terms_.empty()) return sum;
  const Interval pi = Interval::pi(prec);
  const Interval pi2 = pi * pi;
  for (const auto& [k, q] : terms_) {
    sum += Interval(q, prec) * pi2.pow(static_cast<unsigned long>(k));
  }
  return sum;
}

Approx Pi2Scalar::to_float(mpfr_prec_t prec) const {
  const Interval iv = enclose(prec);
  Approx a;
  a.value = iv.mid();
  a.error = iv.radius() + std::abs(a.value) * std::numeric_limits<double>::epsilon();
  return a;
}

std::string Pi2Scalar::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, q] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << q.get_str(10);
    if (k > 0) os << " · π^" << 2 * k;
  }
  return os.str();
}

nlohmann::json Pi2Scalar::to_json() const {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [k, q] : terms_) {
    terms.push_back(nlohmann::json::array({k, q.get_num().get_str(10) + "/" + q.get_den().get_str(10)}));
  }
  return nlohmann::json{{"terms", terms}};
}

Pi2Scalar Pi2Scalar::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("terms") || !j.at("terms").is_array()) {
    throw std::invalid_argument("Pi2Scalar JSON must be an object with a \"terms\" array");
  }
  Pi2Scalar r;
  int last = -1;
  for (const auto& t : j.at("terms")) {
    if (!t.is_array() || t.size() != 2) throw std::invalid_argument("Pi2Scalar term must be [k, \"num/den\"]");
    const int k = t.at(0).get<int>();
    if (k < 0 || k <= last) throw std::invalid_argument("Pi2Scalar degrees must be ascending and nonnegative");
    last = k;
    Rational q = parse_rational(t.at(1).get<std::string>());
    if (q == 0) throw std::invalid_argument("Pi2Scalar JSON stores a zero coefficient");
    r.terms_.emplace_back(k, q);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Bernoulli numbers and the recursion coefficients

Integer factorial(unsigned n) {
  Integer r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

Integer binomial(unsigned n, unsigned k) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

namespace {

std::mutex g_table_mutex;

// B_0..B_m with B_1 = -1/2, grown on demand.
const std::deque<Rational>& bernoulli_table(int m) {
  static std::deque<Rational> table{Rational(1)};
  while (static_cast<int>(table.size()) <= m) {
    const unsigned n = static_cast<unsigned>(table.size());
    Rational acc(0);
    for (unsigned j = 0; j < n; ++j) acc += Rational(binomial(n + 1, j)) * table[j];
    Rational b = -acc / Rational(n + 1);
    b.canonicalize();
    table.push_back(b);
  }
  return table;
}

}  // namespace

Rational bernoulli(int m) {
  if (m < 0 || m % 2 != 0) throw std::invalid_argument("bernoulli: m must be even and nonnegative");
  std::lock_guard<std::mutex> lock(g_table_mutex);
  return bernoulli_table(m)[static_cast<std::size_t>(m)];
}

const Rational& a_rational(int L) {
  static const Rational zero(0);
  static std::deque<Rational> table;
  if (L < 0) return zero;
  std::lock_guard<std::mutex> lock(g_table_mutex);
  while (static_cast<int>(table.size()) <= L) {
    const int n = static_cast<int>(table.size());
    if (n == 0) {
      table.emplace_back(1, 2);
      continue;
    }
    // zeta(2n) / pi^{2n} = (-1)^{n+1} B_{2n} 2^{2n} / (2 (2n)!)
    const Rational& b = bernoulli_table(2 * n)[static_cast<std::size_t>(2 * n)];
    Integer two_pow;
    mpz_ui_pow_ui(two_pow.get_mpz_t(), 2, static_cast<unsigned long>(2 * n));
    Rational zeta = b * Rational(two_pow) / Rational(2 * factorial(static_cast<unsigned>(2 * n)));
    if (n % 2 == 0) zeta = -zeta;
    Integer two_pow_m;
    mpz_ui_pow_ui(two_pow_m.get_mpz_t(), 2, static_cast<unsigned long>(2 * n - 1));
    Rational factor = Rational(1) - Rational(Integer(1), two_pow_m);
    Rational a = zeta * factor;
    a.canonicalize();
    table.push_back(a);
  }
  return table[static_cast<std::size_t>(L)];
}

Pi2Scalar a_coeff(int L) {
  if (L < 0) return Pi2Scalar();
  return Pi2Scalar::monomial(L, a_rational(L));
}

}  // namespace wpvol
