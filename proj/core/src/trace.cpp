#include "wpvol/trace.hpp"

#include "wpvol/geodesics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

namespace wpvol {

namespace {

std::string format_length(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_length(const nlohmann::json& v) {
  if (v.is_number()) return v.get<double>();
  if (!v.is_string()) throw std::invalid_argument("length spectrum: length must be a decimal string");
  const std::string s = v.get<std::string>();
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw std::invalid_argument("length spectrum: bad length '" + s + "'");
  return x;
}

// sinh(a T) / a, continuous at a = 0.
double sinhc(double a, double T) {
  const double z = a * T;
  if (std::abs(z) < 1e-6) return T * (1.0 + z * z / 6.0);
  return std::sinh(z) / a;
}

}  // namespace

// ---------------------------------------------------------------------------
// Data

void LengthSpectrum::validate() const {
  if (genus < 2) throw std::invalid_argument("length spectrum: genus must be at least 2");
  double prev = 0.0;
  for (const auto& [len, mult] : entries) {
    if (!(len > 0.0) || !std::isfinite(len)) throw std::invalid_argument("length spectrum: lengths must be positive");
    if (mult <= 0) throw std::invalid_argument("length spectrum: multiplicities must be positive");
    if (!(len > prev)) throw std::invalid_argument("length spectrum: lengths must be strictly ascending");
    prev = len;
  }
}

double LengthSpectrum::systole() const {
  if (entries.empty()) return std::numeric_limits<double>::infinity();
  return entries.front().first;
}

std::int64_t LengthSpectrum::oriented_count(double lo, double hi) const {
  std::int64_t n = 0;
  for (const auto& [len, mult] : entries) {
    if (len > lo && len <= hi) n += 2 * mult;
  }
  return n;
}

nlohmann::json LengthSpectrum::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [len, mult] : entries) arr.push_back({format_length(len), mult});
  return {{"genus", genus}, {"entries", arr}};
}

LengthSpectrum LengthSpectrum::from_json(const nlohmann::json& j) {
  LengthSpectrum s;
  s.genus = j.at("genus").get<int>();
  std::map<double, std::int64_t> merged;
  for (const auto& e : j.at("entries")) {
    if (!e.is_array() || e.size() != 2) throw std::invalid_argument("length spectrum: entries are [length, mult]");
    merged[parse_length(e[0])] += e[1].get<std::int64_t>();
  }
  s.entries.assign(merged.begin(), merged.end());
  s.validate();
  return s;
}

void SpectralData::validate() const {
  for (double l : small_eigs) {
    if (!(l > 0.0 && l <= 0.25)) throw std::invalid_argument("spectral data: small eigenvalues must lie in (0, 1/4]");
  }
  if (full_eigs) {
    double prev = 0.0;
    for (double l : *full_eigs) {
      if (!(l >= 0.0) || !std::isfinite(l)) throw std::invalid_argument("spectral data: eigenvalues must be >= 0");
      if (l < prev) throw std::invalid_argument("spectral data: eigenvalues must be ascending");
      prev = l;
    }
  }
}

std::vector<double> SpectralData::exponents() const {
  std::vector<double> s;
  s.reserve(small_eigs.size());
  for (double l : small_eigs) s.push_back(0.5 + std::sqrt(std::max(0.0, 0.25 - l)));
  return s;
}

std::complex<double> SpectralData::spectral_parameter(double lambda) {
  if (lambda > 0.25) return {std::sqrt(lambda - 0.25), 0.0};
  return {0.0, std::sqrt(0.25 - lambda)};
}

nlohmann::json SpectralData::to_json() const {
  nlohmann::json j = {{"small_eigs", small_eigs}};
  if (full_eigs) j["full_eigs"] = *full_eigs;
  return j;
}

SpectralData SpectralData::from_json(const nlohmann::json& j) {
  SpectralData d;
  if (j.contains("small_eigs")) d.small_eigs = j.at("small_eigs").get<std::vector<double>>();
  if (j.contains("full_eigs") && !j.at("full_eigs").is_null()) d.full_eigs = j.at("full_eigs").get<std::vector<double>>();
  d.validate();
  return d;
}

// ---------------------------------------------------------------------------
// Bumps

BumpFamily::BumpFamily(double rho, double amplitude) : rho_(rho), amplitude_(amplitude) {
  if (!(rho > 0.0) || !(amplitude > 0.0)) throw std::invalid_argument("bump: rho and amplitude must be positive");
}

double BumpFamily::normalization_constant() {
  static const double c0 = [] {
    const auto f = [](double u) { return std::exp(1.0 - 1.0 / (1.0 - u * u)); };
    return integrate(f, -1.0, 1.0, 1e-14).value;
  }();
  return c0;
}

BumpFamily BumpFamily::counting() { return BumpFamily(1.0 / (2.0 * normalization_constant()), 2.0); }

BumpFamily BumpFamily::smoothing() { return BumpFamily(1.0, 1.0 / normalization_constant()); }

double BumpFamily::operator()(double x) const {
  const double u = x / rho_;
  if (!(std::abs(u) < 1.0)) return 0.0;
  return amplitude_ * std::exp(1.0 - 1.0 / (1.0 - u * u));
}

double BumpFamily::second_derivative(double x) const {
  const double u = x / rho_;
  if (!(std::abs(u) < 1.0)) return 0.0;
  const double w = 1.0 - u * u;
  const double q1 = -2.0 * u / (w * w);
  const double q2 = -2.0 / (w * w) - 8.0 * u * u / (w * w * w);
  return amplitude_ * std::exp(1.0 - 1.0 / w) * (q1 * q1 + q2) / (rho_ * rho_);
}

double BumpFamily::second_derivative_l1() const {
  const auto f = [this](double x) { return std::abs(second_derivative(x)); };
  // Sign changes of eta'' sit symmetrically; quadrature on each half.
  return 2.0 * integrate(f, 0.0, rho_, 1e-9 * amplitude_ / rho_).value;
}

double BumpFamily::hat(double r, double tol) const {
  // Even integrand; split [0, rho] into pieces of about half a period.
  const double ar = std::abs(r);
  const int pieces = std::max(1, static_cast<int>(std::ceil(ar * rho_ / std::numbers::pi)));
  const auto f = [&](double t) { return (*this)(t) * std::cos(ar * t); };
  return 2.0 * integrate(f, 0.0, rho_, tol / 2.0, pieces).value;
}

double BumpFamily::hat_imag(double y, double tol) const {
  const auto f = [&](double t) { return (*this)(t) * std::cosh(y * t); };
  const double scale = std::cosh(y * rho_);
  return 2.0 * integrate(f, 0.0, rho_, tol * scale / 2.0).value;
}

double f_eps(const BumpFamily& eta, double x, double eps) {
  const double w = eta.rho() * eps;
  const double lo = std::max(-w, x - w);
  const double hi = std::min(w, x + w);
  if (!(hi > lo)) return 0.0;
  const auto f = [&](double y) { return eta.scaled(y, eps) * eta.scaled(x - y, eps); };
  return integrate(f, lo, hi, 1e-12 / eps).value;
}

double phi_pm(const BumpFamily& eta, double x, double L, double eps, int sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("phi_pm: sign must be +1 or -1");
  return 0.5 * (f_eps(eta, x - L, eps) + f_eps(eta, x + L, eps)) + sign * f_eps(eta, x, eps);
}

double phi_pm_hat(const BumpFamily& eta, double r, double L, double eps, int sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("phi_pm_hat: sign must be +1 or -1");
  const double h = eta.hat(eps * r);
  return (std::cos(L * r) + sign) * h * h;
}

// ---------------------------------------------------------------------------
// Cosh windows

double cosh_window(double x, double T) { return std::abs(x) <= T ? 2.0 * std::cosh(x / 2.0) : 0.0; }

double cosh_window_hat(double r, double T) {
  return 8.0 / (1.0 + 4.0 * r * r) *
         (2.0 * r * std::sin(r * T) * std::cosh(T / 2.0) + std::cos(r * T) * std::sinh(T / 2.0));
}

double cosh_window_hat_imag(double y, double T) {
  return 2.0 * sinhc(0.5 + y, T) + 2.0 * sinhc(0.5 - y, T);
}

double cosh_window_hat_quadrature(double r, double T, double tol) {
  const double ar = std::abs(r);
  const int pieces = std::max(1, static_cast<int>(std::ceil(ar * T / std::numbers::pi)));
  const auto f = [&](double x) { return 2.0 * std::cosh(x / 2.0) * std::cos(ar * x); };
  return 2.0 * integrate(f, 0.0, T, tol / 2.0, pieces).value;
}

double smoothed_window(const BumpFamily& eta, double x, double T, double eps) {
  const double w = eta.rho() * eps;
  const double lo = std::max(-w, x - T);
  const double hi = std::min(w, x + T);
  if (!(hi > lo)) return 0.0;
  const auto f = [&](double y) { return 2.0 * std::cosh((x - y) / 2.0) * eta.scaled(y, eps); };
  return integrate(f, lo, hi, 1e-12 * std::cosh((std::abs(x) + w) / 2.0)).value;
}

double smoothed_window_hat(const BumpFamily& eta, double r, double T, double eps) {
  return cosh_window_hat(r, T) * eta.hat(eps * r);
}

double smoothed_window_hat_imag(const BumpFamily& eta, double y, double T, double eps) {
  return cosh_window_hat_imag(y, T) * eta.hat_imag(eps * y);
}

// ---------------------------------------------------------------------------
// Length-spectrum functionals

GeometricSums geometric_sums(const LengthSpectrum& spec, double T) {
  CompensatedSum H;
  CompensatedSum psi;
  CompensatedSum nu;
  for (const auto& [l0, mult] : spec.entries) {
    if (l0 > T) break;
    const double w = 2.0 * static_cast<double>(mult);  // both orientations
    nu.add(w * l0);
    for (long k = 1; k * l0 <= T; ++k) {
      const double l = k * l0;
      const double e = std::exp(-l);
      H.add(w * l0 * (1.0 + e) / (1.0 - e));
      psi.add(w * l0);
    }
  }
  return {H.value(), psi.value(), nu.value()};
}

CountIdentity count_identity(const BumpFamily& eta, const LengthSpectrum& spec, double L, double eps, int sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("count_identity: sign must be +1 or -1");
  if (!(eps > 0.0 && eps < 0.01)) throw std::invalid_argument("count_identity: eps must lie in (0, 0.01)");
  if (!(L > 1.0)) throw std::invalid_argument("count_identity: L must exceed 1");
  const double a = 1.0 - eps;
  const double b = L + eps;
  const double delta = 2.0 * eta.rho() * eps;  // support radius of f_eps
  const auto half_f = [&](double s) { return 0.5 * f_eps(eta, s, eps); };
  constexpr double tol = 1e-10;

  // int_{[c - delta, c + delta] cap [a, b]} f(c - tau) / 2 dtau, where the
  // window lies fully inside [a, b] in the common case.
  std::optional<QuadResult> full;
  const auto bump_piece = [&](double c) -> QuadResult {
    const double lo = std::max(a, c - delta);
    const double hi = std::min(b, c + delta);
    if (!(hi > lo)) return {};
    if (lo == c - delta && hi == c + delta) {
      if (!full) full = integrate(half_f, -delta, delta, tol);
      return *full;
    }
    return integrate([&](double tau) { return half_f(c - tau); }, lo, hi, tol);
  };

  CountIdentity out;
  CompensatedSum total;
  CompensatedSum err;
  for (const auto& [len, mult] : spec.entries) {
    if (!(len > 1.0 && len <= L)) continue;
    const double w = 2.0 * static_cast<double>(mult);
    out.exact_count += 2 * mult;
    const QuadResult p1 = bump_piece(len);   // f(l - tau)
    const QuadResult p2 = bump_piece(-len);  // f(l + tau) = f(-l - tau)
    const double p3 = sign * f_eps(eta, len, eps) * (b - a);
    total.add(w * (p1.value + p2.value + p3));
    err.add(w * (p1.error + p2.error));
  }
  out.integral_value = 2.0 * total.value();
  out.error_estimate = 2.0 * err.value();
  return out;
}

PgtError pgt_error(const LengthSpectrum& spec, const SpectralData& sd, double t) {
  if (!(t > 2.0)) throw std::invalid_argument("pgt_error: t must exceed 2");
  PgtError e;
  const double lt = std::log(t);
  e.pi_t = static_cast<double>(spec.oriented_count(0.0, lt));
  e.li_t = li(t);
  CompensatedSum small;
  for (double s : sd.exponents()) small.add(li(std::pow(t, s)));
  e.small_sum = small.value();
  e.er = e.pi_t - e.li_t;
  e.er_minus_small = e.er - e.small_sum;
  e.envelope_3_4 = spec.genus * std::pow(t, 0.75) / lt;
  e.envelope_5_6 = spec.genus * std::pow(t, 5.0 / 6.0) / lt;
  return e;
}

PAResult condition_PA(const SpectralData& sd, int g, double A, const std::vector<double>& Tgrid) {
  if (!sd.full_eigs) throw std::invalid_argument("condition_PA: full eigenvalue list required");
  if (g < 2) throw std::invalid_argument("condition_PA: g must be at least 2");
  if (!(A >= 1.0)) throw std::invalid_argument("condition_PA: A must be at least 1");
  const std::vector<double>& eigs = *sd.full_eigs;
  // The count jumps at T = lambda - 1/4, so the jumps up to the largest grid
  // point join the grid and the check is exact on [0, max T].
  std::vector<double> Ts;
  double t_max = -1.0;
  for (double T : Tgrid) {
    if (T >= 0.0) {
      Ts.push_back(T);
      t_max = std::max(t_max, T);
    }
  }
  for (double l : eigs) {
    if (l > 0.25 && l - 0.25 <= t_max) Ts.push_back(l - 0.25);
  }
  std::sort(Ts.begin(), Ts.end());
  PAResult r;
  for (double T : Ts) {
    std::int64_t count = 0;
    for (double l : eigs) {
      if (l > 0.25 && l <= 0.25 + T) ++count;
    }
    const double ratio = static_cast<double>(count) / (A * g * (1.0 + T));
    if (ratio > r.worst_ratio) {
      r.worst_ratio = ratio;
      r.worst_T = T;
      r.worst_count = count;
    }
  }
  r.holds = r.worst_ratio <= 1.0;
  return r;
}

QuadResult identity_term(const BumpFamily& eta, int g, double T, double eps, double tol) {
  if (g < 2) throw std::invalid_argument("identity_term: g must be at least 2");
  // With r tanh(pi r) = |r| - 2|r| / (e^{2 pi |r|} + 1) and
  // int_0^inf r h(r) dr = -2 int_0^inf g'(u)/u du for even g, both pieces
  // become absolutely convergent integrals.
  const double w = eta.rho() * eps;
  const auto dphi = [&](double u) {
    const double lo = std::max(-w, u - T);
    const double hi = std::min(w, u + T);
    double v = 0.0;
    if (hi > lo) {
      const auto f = [&](double y) { return std::sinh((u - y) / 2.0) * eta.scaled(y, eps); };
      v = integrate(f, lo, hi, 1e-13 * std::cosh((u + w) / 2.0)).value;
    }
    return v + 2.0 * std::cosh(T / 2.0) * (eta.scaled(u + T, eps) - eta.scaled(u - T, eps));
  };
  const auto first_integrand = [&](double u) { return dphi(u) / u; };
  const double scale = std::cosh(T / 2.0);
  QuadResult a1;
  const double mid = std::max(0.0, T - w);
  const double top = T + w;
  if (mid > 0.0) {
    const QuadResult q = integrate(first_integrand, 0.0, mid, tol * scale);
    a1.value += q.value;
    a1.error += q.error;
  }
  {
    const QuadResult q = integrate(first_integrand, mid, top, tol * scale);
    a1.value += q.value;
    a1.error += q.error;
  }
  const auto second_integrand = [&](double r) {
    return r * smoothed_window_hat(eta, r, T, eps) / (std::exp(2.0 * std::numbers::pi * r) + 1.0);
  };
  const QuadResult a2 = integrate(second_integrand, 0.0, 16.0, tol * scale);
  QuadResult out;
  out.value = (g - 1) * (-4.0 * a1.value - 4.0 * a2.value);
  out.error = (g - 1) * 4.0 * (a1.error + a2.error);
  return out;
}

double geometric_side(const LengthSpectrum& spec, const BumpFamily& eta, double T, double eps) {
  const double reach = T + eta.rho() * eps;
  CompensatedSum s;
  for (const auto& [l0, mult] : spec.entries) {
    if (!(l0 < reach)) break;
    const double w = 2.0 * static_cast<double>(mult);
    for (long k = 1; k * l0 < reach; ++k) {
      const double l = k * l0;
      s.add(w * l0 / (2.0 * std::sinh(l / 2.0)) * smoothed_window(eta, l, T, eps));
    }
  }
  return s.value();
}

TraceBalance trace_balance(const SpectralData& sd, const LengthSpectrum& spec, int g, double T, double eps,
                           const BumpFamily& eta, bool enabled) {
  if (!sd.full_eigs) throw std::invalid_argument("trace_balance: full eigenvalue list required");
  if (!(T > 0.0) || !(eps > 0.0)) throw std::invalid_argument("trace_balance: T and eps must be positive");
  sd.validate();
  spec.validate();
  TraceBalance tb;
  if (!enabled) return tb;

  CompensatedSum spectral;
  for (double l : *sd.full_eigs) {
    const std::complex<double> r = SpectralData::spectral_parameter(l);
    spectral.add(r.imag() > 0.0 || l <= 0.25 ? smoothed_window_hat_imag(eta, r.imag(), T, eps)
                                             : smoothed_window_hat(eta, r.real(), T, eps));
  }
  tb.spectral = spectral.value();

  // Weyl-law tail past the last listed eigenvalue with |eta_hat(s)| <= min(1, C/s^2).
  const double last = sd.full_eigs->empty() ? 0.0 : sd.full_eigs->back();
  const double R = last > 0.25 ? std::sqrt(last - 0.25) : 0.0;
  const double c2 = eta.second_derivative_l1();
  const auto envelope = [&](double r) {
    const double s = eps * r;
    const double decay = s > 0.0 ? std::min(1.0, c2 / (s * s)) : 1.0;
    return 2.0 * (g - 1) * r * decay * 8.0 / (1.0 + 4.0 * r * r) *
           (2.0 * r * std::cosh(T / 2.0) + std::sinh(T / 2.0));
  };
  tb.spectral_tail_bound =
      integrate(envelope, R, std::numeric_limits<double>::infinity(), 1e-8 * std::cosh(T / 2.0) * g).value;

  tb.identity = identity_term(eta, g, T, eps).value;
  tb.geometric = geometric_side(spec, eta, T, eps);
  tb.residual = tb.spectral - tb.identity - tb.geometric;

  if (tb.spectral_tail_bound > 1e-6 * std::max(1.0, std::abs(tb.spectral))) {
    std::ostringstream os;
    os << "spectral side truncated at lambda = " << last << "; tail bound " << tb.spectral_tail_bound;
    tb.warnings.push_back(os.str());
  }
  const double reach = T + eta.rho() * eps;
  if (spec.entries.empty() || spec.entries.back().first < reach) {
    std::ostringstream os;
    os << "geometric side assumes the length list is complete up to " << reach;
    tb.warnings.push_back(os.str());
  }
  return tb;
}

SandwichResult check_sandwich(const BumpFamily& eta, double T, double eps, std::size_t points) {
  if (!(T > eps) || !(eps > 0.0)) throw std::invalid_argument("check_sandwich: need T > eps > 0");
  if (points == 0) throw std::invalid_argument("check_sandwich: need at least one point");
  SandwichResult r;
  r.points = points;
  r.min_upper_gap = std::numeric_limits<double>::infinity();
  r.min_lower_gap = std::numeric_limits<double>::infinity();
  const double top = T + eps;
  const double ce = std::cosh(eps / 2.0);
  for (std::size_t i = 1; i <= points; ++i) {
    const double x = top * static_cast<double>(i) / static_cast<double>(points);
    const double mid = cosh_window(x, T);
    const double upper = smoothed_window(eta, x, T + eps, eps);
    const double lower = smoothed_window(eta, x, T - eps, eps) / ce;
    const double slack = 1e-10 * std::max(1.0, mid);
    const double ug = upper - mid;
    const double lg = mid - lower;
    r.min_upper_gap = std::min(r.min_upper_gap, ug);
    r.min_lower_gap = std::min(r.min_lower_gap, lg);
    if (ug < -slack || lg < -slack) ++r.violations;
  }
  r.holds = r.violations == 0;
  return r;
}

bool within_count_bound(const LengthSpectrum& spec, double L) {
  return static_cast<double>(spec.oriented_count(0.0, L)) <= (spec.genus - 1) * std::exp(L + 7.0);
}

LengthSpectrum synthetic_spectrum(const SyntheticOptions& opt) {
  if (opt.genus < 2) throw std::invalid_argument("synthetic_spectrum: genus must be at least 2");
  if (!(opt.min_length > 0.0 && opt.max_length > opt.min_length && opt.bin_width > 0.0)) {
    throw std::invalid_argument("synthetic_spectrum: need 0 < min_length < max_length and bin_width > 0");
  }
  std::mt19937_64 rng(opt.seed);
  std::vector<double> lengths;
  const auto density = [](double l) { return std::exp(l) / (2.0 * l); };
  const long bins = static_cast<long>(std::ceil((opt.max_length - opt.min_length) / opt.bin_width));
  for (long i = 0; i < bins; ++i) {
    const double a = opt.min_length + i * opt.bin_width;
    const double b = std::min(opt.max_length, a + opt.bin_width);
    const double mean = (b - a) / 6.0 * (density(a) + 4.0 * density(0.5 * (a + b)) + density(b));
    std::poisson_distribution<long> count(mean);
    std::uniform_real_distribution<double> where(a, b);
    const long n = count(rng);
    for (long k = 0; k < n; ++k) lengths.push_back(where(rng));
  }
  std::sort(lengths.begin(), lengths.end());
  LengthSpectrum s;
  s.genus = opt.genus;
  for (double l : lengths) {
    if (!s.entries.empty() && s.entries.back().first == l) {
      ++s.entries.back().second;
    } else {
      s.entries.emplace_back(l, 1);
    }
  }
  return s;
}

}  // namespace wpvol
