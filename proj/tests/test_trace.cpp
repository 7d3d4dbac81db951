#include "wpvol/geodesics.hpp"
#include "wpvol/trace.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

using namespace wpvol;

namespace {

LengthSpectrum spectrum(int genus, std::vector<std::pair<double, std::int64_t>> entries) {
  LengthSpectrum s;
  s.genus = genus;
  s.entries = std::move(entries);
  return s;
}

}  // namespace

TEST_CASE("bump normalization") {
  const double C0 = BumpFamily::normalization_constant();
  const QuadResult q = integrate([](double u) { return std::exp(1.0 - 1.0 / (1.0 - u * u)); }, -1.0, 1.0, 1e-14);
  CHECK(C0 == doctest::Approx(q.value).epsilon(1e-13));
  CHECK(C0 == doctest::Approx(1.2069003224).epsilon(1e-9));

  const BumpFamily c = BumpFamily::counting();
  CHECK(c.rho() < 0.5);
  CHECK(c.rho() == doctest::Approx(0.41428441993).epsilon(1e-9));
  CHECK(c(0.0) == doctest::Approx(2.0));
  CHECK(c(0.3) < 2.0);
  CHECK(c(c.rho()) == 0.0);
  CHECK(c.mass() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(c.hat(0.0) - 1.0) < 1e-10);

  const BumpFamily s = BumpFamily::smoothing();
  CHECK(s.rho() == 1.0);
  CHECK(std::abs(s.hat(0.0) - 1.0) < 1e-10);
  CHECK(s.hat_imag(0.0) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(s.hat_imag(1.0) > 1.0);
  CHECK(std::abs(s.hat(30.0)) < s.second_derivative_l1() / 900.0);
  CHECK(s.scaled(0.0, 0.5) == doctest::Approx(2.0 * s(0.0)));
}

TEST_CASE("counting test functions") {
  const BumpFamily eta = BumpFamily::counting();
  const double eps = 0.005;
  CHECK(phi_pm_hat(eta, 0.0, 4.0, eps, +1) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(std::abs(phi_pm_hat(eta, 0.0, 4.0, eps, -1)) < 1e-9);
  for (double r : {0.1, 1.0, 5.0, 40.0}) {
    CHECK(phi_pm_hat(eta, r, 4.0, eps, +1) >= -1e-12);
    CHECK(phi_pm_hat(eta, r, 4.0, eps, -1) <= 1e-12);
  }
  CHECK(f_eps(eta, 2 * eta.rho() * eps, eps) == 0.0);
  CHECK(f_eps(eta, 0.0, eps) > 0.0);
  CHECK_THROWS_AS(phi_pm(eta, 0.0, 4.0, eps, 0), std::invalid_argument);
  const QuadResult mass = integrate([&](double x) { return f_eps(eta, x, eps); }, -2 * eta.rho() * eps,
                                    2 * eta.rho() * eps, 1e-9, 4);
  CHECK(mass.value == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("cosh window transforms") {
  CHECK(cosh_window_hat(0.0, 2.0) == doctest::Approx(8.0 * std::sinh(1.0)).epsilon(1e-15));
  CHECK(cosh_window(1.0, 2.0) == doctest::Approx(2.0 * std::cosh(0.5)));
  CHECK(cosh_window(3.0, 2.0) == 0.0);
  for (double T : {1.0, 5.0}) {
    for (double r : {0.0, 0.5, 3.0}) {
      CHECK(std::abs(cosh_window_hat(r, T) - cosh_window_hat_quadrature(r, T)) < 1e-8);
    }
    CHECK(cosh_window_hat_imag(0.0, T) == doctest::Approx(cosh_window_hat(0.0, T)));
  }
  const BumpFamily eta = BumpFamily::smoothing();
  CHECK(smoothed_window_hat(eta, 0.7, 3.0, 0.2) ==
        doctest::Approx(cosh_window_hat(0.7, 3.0) * eta.hat(0.14)).epsilon(1e-10));
  // Far from the window edges the smoothing only rescales by eta_hat(i eps / 2).
  CHECK(smoothed_window(eta, 1.0, 5.0, 0.2) ==
        doctest::Approx(2.0 * std::cosh(0.5) * eta.hat_imag(0.1)).epsilon(1e-10));
}

TEST_CASE("sandwich inequalities") {
  const BumpFamily eta = BumpFamily::smoothing();
  for (auto [T, eps] : {std::pair{5.0, 0.2}, std::pair{10.0, 0.5}}) {
    const SandwichResult s = check_sandwich(eta, T, eps, 200);
    CHECK(s.holds);
    CHECK(s.points == 200);
    CHECK(s.violations == 0);
  }
}

TEST_CASE("geometric sums") {
  const GeometricSums empty = geometric_sums(spectrum(2, {}), 7.0);
  CHECK(empty.H == 0.0);
  CHECK(empty.psi == 0.0);
  CHECK(empty.nu == 0.0);

  const GeometricSums s = geometric_sums(spectrum(2, {{3.0, 1}}), 7.0);
  CHECK(s.psi == doctest::Approx(12.0));
  CHECK(s.nu == doctest::Approx(6.0));
  double H = 0.0;
  for (int k = 1; k <= 2; ++k) H += 3.0 * (1 + std::exp(-3.0 * k)) / (1 - std::exp(-3.0 * k));
  CHECK(s.H == doctest::Approx(2.0 * H).epsilon(1e-14));
  CHECK(s.H >= s.psi);
  CHECK(s.psi >= s.nu);
}

TEST_CASE("count identity") {
  const BumpFamily eta = BumpFamily::counting();
  const LengthSpectrum s = spectrum(2, {{2.0, 1}, {3.5, 2}});
  const CountIdentity plus = count_identity(eta, s, 4.0, 0.005, +1);
  const CountIdentity minus = count_identity(eta, s, 4.0, 0.005, -1);
  CHECK(plus.exact_count == 6);
  CHECK(minus.exact_count == 6);
  CHECK(std::abs(plus.integral_value - 6.0) < 1e-6);
  CHECK(std::abs(minus.integral_value - 6.0) < 1e-6);
  CHECK(std::abs(plus.integral_value - minus.integral_value) < 2e-6);

  const CountIdentity none = count_identity(eta, spectrum(2, {}), 4.0, 0.005, +1);
  CHECK(none.exact_count == 0);
  CHECK(none.integral_value == 0.0);
  CHECK_THROWS_AS(count_identity(eta, s, 4.0, 0.1, +1), std::invalid_argument);
  CHECK_THROWS_AS(count_identity(eta, s, 0.5, 0.005, +1), std::invalid_argument);
}

TEST_CASE("count identity on synthetic spectra") {
  const BumpFamily eta = BumpFamily::counting();
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    SyntheticOptions o;
    o.seed = seed;
    o.max_length = 5.0;
    const LengthSpectrum s = synthetic_spectrum(o);
    const CountIdentity c = count_identity(eta, s, 4.5, 0.005, seed % 2 ? 1 : -1);
    CHECK(std::abs(c.integral_value - static_cast<double>(c.exact_count)) < 1e-6);
  }
}

TEST_CASE("prime geodesic error terms") {
  const PgtError e = pgt_error(spectrum(2, {}), SpectralData{}, std::numbers::e);
  CHECK(e.er == doctest::Approx(-li(std::numbers::e)));
  CHECK(e.pi_t == 0.0);

  SpectralData quarter;
  quarter.small_eigs = {0.25};
  CHECK(quarter.exponents()[0] == doctest::Approx(0.5));
  const PgtError q = pgt_error(spectrum(2, {}), quarter, 100.0);
  CHECK(q.small_sum == doctest::Approx(li(10.0)).epsilon(1e-12));

  const PgtError c = pgt_error(spectrum(2, {{1.0, 1}, {2.0, 3}}), SpectralData{}, std::exp(2.5));
  CHECK(c.pi_t == doctest::Approx(8.0));
  CHECK(c.envelope_3_4 > 0.0);
}

TEST_CASE("condition P_A") {
  SpectralData sd;
  sd.full_eigs = std::vector<double>{};
  CHECK(condition_PA(sd, 2, 1.0, {0.0, 1.0, 10.0}).holds);
  sd.full_eigs = std::vector<double>{0.3, 0.3, 0.5};
  const PAResult r = condition_PA(sd, 2, 1.0, {0.05});
  CHECK(r.holds);
  CHECK(r.worst_count == 2);
  CHECK(r.worst_ratio <= 1.0);
  CHECK_FALSE(condition_PA(sd, 2, 1.0, {0.05, 0.3}).holds);
  SpectralData crowded;
  crowded.full_eigs = std::vector<double>(10, 0.4);
  CHECK_FALSE(condition_PA(crowded, 2, 1.0, {0.2}).holds);
  CHECK_THROWS_AS(condition_PA(SpectralData{}, 2, 1.0, {0.0}), std::invalid_argument);
  CHECK_THROWS_AS(condition_PA(sd, 2, 0.5, {0.0}), std::invalid_argument);
}

TEST_CASE("spectral data validation") {
  SpectralData sd;
  sd.small_eigs = {0.3};
  CHECK_THROWS_AS(sd.validate(), std::invalid_argument);
  sd.small_eigs = {0.1, 0.2};
  CHECK_NOTHROW(sd.validate());
  CHECK(SpectralData::spectral_parameter(1.25) == std::complex<double>(1.0, 0.0));
  CHECK(SpectralData::spectral_parameter(0.0).imag() == doctest::Approx(0.5));
  const SpectralData back = SpectralData::from_json(sd.to_json());
  CHECK(back.small_eigs == sd.small_eigs);
}

TEST_CASE("length spectrum serialization") {
  const LengthSpectrum s = spectrum(3, {{1.25, 1}, {0.1 + 0.2, 2}});
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  const LengthSpectrum t = spectrum(3, {{0.1 + 0.2, 2}, {1.25, 1}});
  CHECK_NOTHROW(t.validate());
  const LengthSpectrum back = LengthSpectrum::from_json(t.to_json());
  CHECK(back.entries == t.entries);
  CHECK(back.genus == 3);
  CHECK(t.systole() == doctest::Approx(0.3));
  CHECK(t.oriented_count(0.0, 1.0) == 4);
  CHECK(t.oriented_count(0.31, 1.25) == 2);
}

TEST_CASE("synthetic spectra") {
  SyntheticOptions o;
  o.seed = 42;
  const LengthSpectrum a = synthetic_spectrum(o);
  const LengthSpectrum b = synthetic_spectrum(o);
  CHECK(a.entries == b.entries);
  CHECK_NOTHROW(a.validate());
  CHECK(a.entries.front().first >= o.min_length);
  CHECK(a.entries.back().first <= o.max_length);
  CHECK(within_count_bound(a, o.max_length));
  o.seed = 43;
  CHECK(synthetic_spectrum(o).entries != a.entries);
}

TEST_CASE("identity term") {
  const BumpFamily eta = BumpFamily::smoothing();
  const QuadResult fine = identity_term(eta, 2, 1.0, 0.1, 1e-10);
  const QuadResult coarse = identity_term(eta, 2, 1.0, 0.1, 1e-8);
  CHECK(std::abs(fine.value - coarse.value) < 1e-6);
  CHECK(fine.value == doctest::Approx(6.673202964006).epsilon(1e-10));
  CHECK(identity_term(eta, 4, 1.0, 0.1).value == doctest::Approx(3.0 * fine.value).epsilon(1e-9));
}

TEST_CASE("identity term against direct spectral integration") {
  // (g-1) int_R r tanh(pi r) phi_hat(r) dr with phi_hat = cosh_window_hat * eta_hat(eps r).
  const BumpFamily eta = BumpFamily::smoothing();
  const double T = 1.0;
  const double eps = 1.0;
  const int n = 6000;
  const double R = 240.0;
  const double h = R / n;
  double s = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double r = i * h;
    const double f = r * std::tanh(std::numbers::pi * r) * cosh_window_hat(r, T) * eta.hat(eps * r);
    s += (i == 0 || i == n ? 1.0 : (i % 2 ? 4.0 : 2.0)) * f;
  }
  const double direct = 2.0 * s * h / 3.0;  // twice the half line, g - 1 = 1
  CHECK(identity_term(eta, 2, T, eps).value == doctest::Approx(direct).epsilon(1e-6));
}

TEST_CASE("trace balance") {
  const BumpFamily eta = BumpFamily::smoothing();
  const LengthSpectrum s = spectrum(2, {{3.0, 1}});
  SpectralData sd;
  sd.full_eigs = std::vector<double>{0.5, 2.0};
  const TraceBalance off = trace_balance(sd, s, 2, 5.0, 0.1, eta, false);
  CHECK(off.residual == 0.0);
  CHECK(off.spectral == 0.0);
  CHECK(off.geometric == 0.0);
  CHECK(off.identity == 0.0);

  const TraceBalance on = trace_balance(sd, s, 2, 7.0, 0.1, eta);
  CHECK(on.residual == doctest::Approx(on.spectral - on.identity - on.geometric));
  CHECK_FALSE(on.warnings.empty());

  const double T = 7.0, eps = 0.1;
  double hand = 0.0;
  for (int k = 1; k <= 2; ++k) {
    const double l = 3.0 * k;
    hand += 2.0 * 3.0 / (2.0 * std::sinh(l / 2.0)) * smoothed_window(eta, l, T, eps);
  }
  CHECK(geometric_side(s, eta, T, eps) == doctest::Approx(hand).epsilon(1e-10));
  CHECK(std::abs(geometric_side(s, eta, T, eps) - hand) < 1e-8);
}
