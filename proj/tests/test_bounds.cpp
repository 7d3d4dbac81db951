#include "wpvol/bounds.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace wpvol;

TEST_CASE("band constants") {
  const BandConstants k = BandConstants::compute();
  const double pi2 = std::numbers::pi * std::numbers::pi;
  CHECK(k.b0.mid() == doctest::Approx((10 - pi2) / 120).epsilon(1e-15));
  double b1 = 0.0;
  double fact = 6.0;  // (2l+1)! at l = 1
  for (int l = 1; l <= 40; ++l) {
    b1 += l * std::pow(pi2, l - 1) / fact;
    fact *= (2 * l + 2) * (2 * l + 3);
  }
  CHECK(k.b1.mid() == doctest::Approx(b1).epsilon(1e-14));
  CHECK(k.b1.radius() < 1e-12);
  CHECK(k.b.mid() * k.b0.mid() == doctest::Approx(1.0));
  CHECK(k.c_proof.mid() == doctest::Approx(2.0 / (3.0 * k.b.mid())));
}

TEST_CASE("small sweeps pass") {
  const IntersectionEngine e;
  CHECK(band_sweep(e, 4, 3).passed);
  CHECK(monotonicity_sweep(e, KeySweep{0, 3, 1, 3}).passed);
  CHECK(decay_sweep(e, KeySweep{0, 3, 1, 3}).passed);
  CHECK(check_sum_products(e, 6).passed);
  CHECK(ratio_trend(e, {0, 1, 2}, 2, 6).passed);
  CHECK(genus_shift_trend(e, {0, 1}, 3, 6).passed);
  CHECK(sinh_sweep(e, {{2, 1}, {3, 2}}, uniform_grid(0.0, 20.0, 2.0)).passed);
}

TEST_CASE("constructive decay on a single key") {
  const IntersectionEngine e;
  const std::vector<int> d{4};
  const DecayCheck c = check_constructive_decay(e, 2, 1, d);
  CHECK(c.lhs.upper() <= 1.0);
  CHECK(c.lhs.lower() > 0.0);
  // h = c_proof * 16 / 3 < 1 here, so the bound is vacuous.
  CHECK(c.vacuous);
  CHECK(c.holds);

  const DecayCheck forced = check_constructive_decay(e, 2, 1, d, Interval(Rational(2)));
  CHECK_FALSE(forced.vacuous);
  CHECK(forced.I == std::vector<int>{0});
}

TEST_CASE("key enumeration") {
  const auto keys = enumerate_keys(KeySweep{0, 1, 1, 3});
  CHECK_FALSE(keys.empty());
  for (const auto& k : keys) {
    CHECK(2 * k.g - 2 + k.n > 0);
    CHECK(k.index_sum() <= k.dimension());
    CHECK(std::is_sorted(k.d.rbegin(), k.d.rend()));
  }
  CHECK(std::is_sorted(keys.begin(), keys.end()));
}

TEST_CASE("sinh factor and grid") {
  const std::vector<double> x{0.0, 2.0};
  const Interval s = sinh_factor(x);
  CHECK(s.mid() == doctest::Approx(std::sinh(1.0)));
  const auto grid = uniform_grid(0.0, 1.0, 0.25);
  CHECK(grid.size() == 5);
  CHECK(grid.back() == doctest::Approx(1.0));
}

TEST_CASE("inup estimate is finite and positive") {
  const IntersectionEngine e;
  const SweepReport r = estimate_inup_constant(e, KeySweep{2, 3, 1, 1});
  double c_emp = 0.0;
  for (const auto& [k, v] : r.summary) {
    if (k == "c_emp_full") c_emp = std::stod(v);
  }
  CHECK(std::isfinite(c_emp));
  CHECK(c_emp > 0.0);
  CHECK(r.passed);
}

TEST_CASE("volume decay reports at the far grid point") {
  const IntersectionEngine e;
  const SweepReport r = check_volume_decay(e, 1, {{2, 1}}, {0.0, 20.0});
  CHECK_FALSE(r.table.rows.empty());
}
