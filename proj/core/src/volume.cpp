#include "wpvol/volume.hpp"

#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace wpvol {

namespace {

void require_hyperbolic(int g, int n, const char* what) {
  if (g < 0 || n < 1 || 2 * g - 2 + n <= 0) {
    throw std::invalid_argument(std::string(what) + ": (g, n) = (" + std::to_string(g) + ", " +
                                std::to_string(n) + ") is not a hyperbolic type with n >= 1");
  }
}

// prod_i 1 / (2^{2 d_i} (2 d_i + 1)!)
Rational variable_change_factor(std::span<const int> d) {
  Integer den(1);
  for (int v : d) {
    Integer p;
    mpz_ui_pow_ui(p.get_mpz_t(), 2, 2 * static_cast<unsigned long>(v));
    den *= p * factorial(static_cast<unsigned>(2 * v + 1));
  }
  return Rational(Integer(1), den);
}

}  // namespace

VolumePolynomial::VolumePolynomial(int g, int n, Coeffs coeffs) : g_(g), n_(n), coeffs_(std::move(coeffs)) {
  for (const auto& [d, c] : coeffs_) {
    if (static_cast<int>(d.size()) != n_) throw std::invalid_argument("VolumePolynomial: exponent length != n");
    (void)c;
  }
}

Pi2Scalar VolumePolynomial::coeff(std::span<const int> d) const {
  auto it = coeffs_.find(std::vector<int>(d.begin(), d.end()));
  return it == coeffs_.end() ? Pi2Scalar() : it->second;
}

Pi2Scalar VolumePolynomial::constant_term() const { return coeff(std::vector<int>(static_cast<std::size_t>(n_), 0)); }

nlohmann::json VolumePolynomial::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [d, c] : coeffs_) arr.push_back({d, c.to_json()});
  return {{"g", g_}, {"n", n_}, {"coeffs", std::move(arr)}};
}

VolumePolynomial VolumePolynomial::from_json(const nlohmann::json& j) {
  Coeffs coeffs;
  for (const auto& rec : j.at("coeffs")) {
    coeffs.emplace(rec.at(0).get<std::vector<int>>(), Pi2Scalar::from_json(rec.at(1)));
  }
  return VolumePolynomial(j.at("g").get<int>(), j.at("n").get<int>(), std::move(coeffs));
}

Pi2Scalar volume(const IntersectionEngine& engine, int g, int n) {
  require_hyperbolic(g, n, "volume");
  const std::vector<int> zeros(static_cast<std::size_t>(n), 0);
  return engine.tau(g, n, zeros);
}

Pi2Scalar closed_volume(const IntersectionEngine& engine, int g) {
  if (g < 2) throw std::invalid_argument("closed_volume: g must be at least 2");
  // V_{g,1}(b) = sum_k c_k b^{2k}; V_g = -(sum_k 2k c_k (-4 pi^2)^k) / (4 pi^2 (2g-2)).
  Pi2Scalar sum;
  const int dim = 3 * g - 2;
  for (int k = 1; k <= dim; ++k) {
    const std::vector<int> d{k};
    const Pi2Scalar c = engine.tau(g, 1, d) * variable_change_factor(d);
    Integer four_pow;
    mpz_ui_pow_ui(four_pow.get_mpz_t(), 4, static_cast<unsigned long>(k));
    Rational w(Integer(2 * k) * four_pow);
    if (k % 2 == 1) w = -w;
    sum.add_scaled(w, c.shifted(k));
  }
  sum *= Rational(-1, 4 * (2 * g - 2));
  Pi2Scalar v = sum.shifted(-1);
  if (!v.is_homogeneous(3 * g - 3) || v.is_zero() || v.terms().front().second <= 0) {
    throw IntegrityError("closed_volume(" + std::to_string(g) + ") failed the homogeneity/positivity check: " +
                         v.to_string());
  }
  return v;
}

Pi2Scalar volume_any(const IntersectionEngine& engine, int g, int n) {
  return n == 0 ? closed_volume(engine, g) : volume(engine, g, n);
}

VolumePolynomial volume_polynomial(const IntersectionEngine& engine, int g, int n) {
  require_hyperbolic(g, n, "volume_polynomial");
  engine.budget().admit(g, n);
  const int dim = 3 * g - 3 + n;
  VolumePolynomial::Coeffs coeffs;
  std::map<std::vector<int>, Pi2Scalar> by_sorted;
  std::vector<int> d(static_cast<std::size_t>(n), 0);
  const std::function<void(int, int)> fill = [&](int slot, int budget) {
    if (slot == n) {
      std::vector<int> s = d;
      std::sort(s.begin(), s.end(), std::greater<>());
      auto it = by_sorted.find(s);
      if (it == by_sorted.end()) {
        it = by_sorted.emplace(s, engine.tau(g, n, s) * variable_change_factor(s)).first;
      }
      coeffs.emplace(d, it->second);
      return;
    }
    for (int v = 0; v <= budget; ++v) {
      d[static_cast<std::size_t>(slot)] = v;
      fill(slot + 1, budget - v);
    }
    d[static_cast<std::size_t>(slot)] = 0;
  };
  fill(0, dim);
  return VolumePolynomial(g, n, std::move(coeffs));
}

// ---------------------------------------------------------------------------

PolynomialEvaluator::PolynomialEvaluator(const VolumePolynomial& p, mpfr_prec_t prec) : prec_(prec), n_(p.n()) {
  terms_.reserve(p.coeffs().size());
  for (const auto& [d, c] : p.coeffs()) terms_.emplace_back(d, c.enclose(prec));
}

Interval PolynomialEvaluator::operator()(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != n_) throw std::invalid_argument("eval_poly: expected " + std::to_string(n_) + " arguments");
  int max_deg = 0;
  for (const auto& t : terms_) {
    for (int v : t.first) max_deg = std::max(max_deg, v);
  }
  // powers[i][k] = x_i^{2k}
  std::vector<std::vector<Interval>> powers(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] >= 0.0)) throw std::invalid_argument("eval_poly: arguments must be nonnegative");
    const Interval xi(x[i], prec_);
    const Interval sq = xi * xi;
    powers[i].reserve(static_cast<std::size_t>(max_deg) + 1);
    powers[i].emplace_back(Rational(1), prec_);
    for (int k = 1; k <= max_deg; ++k) powers[i].push_back(powers[i].back() * sq);
  }
  Interval acc(prec_);
  for (const auto& [d, c] : terms_) {
    Interval term = c;
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (d[i] != 0) term *= powers[i][static_cast<std::size_t>(d[i])];
    }
    acc += term;
  }
  return acc;
}

Interval eval_poly_interval(const VolumePolynomial& p, std::span<const double> x, mpfr_prec_t prec) {
  return PolynomialEvaluator(p, prec)(x);
}

double eval_poly(const VolumePolynomial& p, std::span<const double> x, mpfr_prec_t prec) {
  return eval_poly_interval(p, x, prec).mid();
}

// ---------------------------------------------------------------------------

void LPolynomial::add(int power, const Pi2Scalar& c) {
  if (c.is_zero()) return;
  auto& slot = terms_[power];
  slot += c;
  if (slot.is_zero()) terms_.erase(power);
}

LPolynomial& LPolynomial::operator*=(const Rational& q) {
  if (q == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [p, c] : terms_) c *= q;
  return *this;
}

LPolynomial& LPolynomial::operator+=(const LPolynomial& o) {
  for (const auto& [p, c] : o.terms_) add(p, c);
  return *this;
}

Pi2Scalar LPolynomial::at(const Rational& L) const {
  Pi2Scalar acc;
  for (const auto& [p, c] : terms_) {
    Rational lp(1);
    mpz_pow_ui(lp.get_num_mpz_t(), L.get_num_mpz_t(), static_cast<unsigned long>(p));
    mpz_pow_ui(lp.get_den_mpz_t(), L.get_den_mpz_t(), static_cast<unsigned long>(p));
    acc.add_scaled(lp, c);
  }
  return acc;
}

std::string LPolynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [p, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.to_string() << ")";
    if (p == 1) {
      os << " · L";
    } else if (p > 1) {
      os << " · L^" << p;
    }
  }
  return os.str();
}

namespace {

LPolynomial moment_1d(const VolumePolynomial& p) {
  LPolynomial out;
  for (const auto& [d, c] : p.coeffs()) {
    const int k = std::accumulate(d.begin(), d.end(), 0);
    Pi2Scalar term = c * Rational(1, 2 * k + 2);
    out.add(2 * k + 2, term);
  }
  return out;
}

LPolynomial moment_2d(const VolumePolynomial& p, const std::vector<int>& groups) {
  if (static_cast<int>(groups.size()) != p.n()) throw std::invalid_argument("diagonal_moment: group vector length != n");
  LPolynomial out;
  for (const auto& [d, c] : p.coeffs()) {
    int a = 0;
    int b = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (groups[i] == 0) {
        a += d[i];
      } else if (groups[i] == 1) {
        b += d[i];
      } else {
        throw std::invalid_argument("diagonal_moment: groups must be 0 or 1");
      }
    }
    out.add(2 * a + 2 * b + 4, c * Rational(1, (2 * a + 2) * (2 * b + 2)));
  }
  return out;
}

LPolynomial moment_product(const VolumePolynomial& p, const VolumePolynomial& q) {
  if (p.n() != 2 || q.n() != 2) throw std::invalid_argument("diagonal_moment: product pattern needs two (., 2) polynomials");
  LPolynomial out;
  for (const auto& [d1, c1] : p.coeffs()) {
    for (const auto& [d2, c2] : q.coeffs()) {
      const int a = d1[0] + d2[0];
      const int b = d1[1] + d2[1];
      Pi2Scalar term;
      term.add_product(Rational(1, (2 * a + 2) * (2 * b + 2)), c1, c2);
      out.add(2 * a + 2 * b + 4, term);
    }
  }
  return out;
}

}  // namespace

LPolynomial diagonal_moment_poly(const VolumePolynomial& p, const DiagonalPattern& pattern) {
  return std::visit(
      [&](const auto& pat) -> LPolynomial {
        using T = std::decay_t<decltype(pat)>;
        if constexpr (std::is_same_v<T, Diagonal1D>) {
          return moment_1d(p);
        } else if constexpr (std::is_same_v<T, Diagonal2D>) {
          return moment_2d(p, pat.groups);
        } else {
          if (pat.other == nullptr) throw std::invalid_argument("diagonal_moment: product pattern without a second polynomial");
          return moment_product(p, *pat.other);
        }
      },
      pattern);
}

Pi2Scalar diagonal_moment(const VolumePolynomial& p, const DiagonalPattern& pattern, const Rational& L) {
  if (L < 0) throw std::invalid_argument("diagonal_moment: L must be nonnegative");
  return diagonal_moment_poly(p, pattern).at(L);
}

}  // namespace wpvol
