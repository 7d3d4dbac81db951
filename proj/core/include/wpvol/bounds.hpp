#pragma once

// Checkers and sweeps for the inequalities on intersection numbers and
// Weil-Petersson volumes.

#include "wpvol/report.hpp"
#include "wpvol/volume.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace wpvol {

struct BandConstants {
  Interval b0;       // (10 - pi^2) / 120
  Interval b1;       // sum_{l>=1} l pi^{2l-2} / (2l+1)!, tail enclosed
  Interval b;        // 120 / (10 - pi^2)
  Interval c_proof;  // 2 / (3b)

  static BandConstants compute(mpfr_prec_t prec = working_precision());
};

// Hyperbolic (g, n) pairs with g in [gmin, gmax], n in [nmin, nmax].
struct KeySweep {
  int gmin = 0;
  int gmax = 5;
  int nmin = 1;
  int nmax = 3;
};

// All canonical keys with |d| <= 3g-3+n in lexicographic key order.
std::vector<IndexKey> enumerate_keys(const KeySweep& sweep);

struct DecayCheck {
  bool holds = true;
  bool vacuous = true;     // I is empty
  std::vector<int> I;      // positions with h_i > 1
  Interval lhs;            // tau_ratio
  Interval rhs;            // prod_{i in I} (1/h_i)^{log_4(h_i)/2}, 1 when vacuous
};

// h_i = c d_i^2 / (2g-2+n) with c = c_proof unless overridden.
DecayCheck check_constructive_decay(const IntersectionEngine& engine, int g, int n, std::span<const int> d,
                                    const std::optional<Interval>& c = std::nullopt);

// Runs check_constructive_decay over every key of the sweep. passed is
// false on any failure among keys with nonempty I.
SweepReport decay_sweep(const IntersectionEngine& engine, const KeySweep& sweep,
                        const std::optional<Interval>& c = std::nullopt);

// tau(d + e_i) < tau(d) <= tau(d with d_i = 0) <= V_{g,n} for every slot i.
SweepReport monotonicity_sweep(const IntersectionEngine& engine, const KeySweep& sweep);

// max over the sweep of tau_ratio * max d_i^2 / (2g-2+n), on the full and
// the half (lower genus half) sweep.
SweepReport estimate_inup_constant(const IntersectionEngine& engine, const KeySweep& sweep);

// Smallest c(k) with V(x)/V <= (prod min{c m / x_i^2, 1})^k prod sinh(x_i/2)/(x_i/2)
// at every grid point; also counts violations of the k = 0 bound.
SweepReport check_volume_decay(const IntersectionEngine& engine, int k, const std::vector<std::pair<int, int>>& types,
                               const std::vector<double>& grid);

// g * sum V_{g1,1} V_{g2,1} / V_g and g^2 * sum V_{g1,2} V_{g2,2} / V_g.
SweepReport check_sum_products(const IntersectionEngine& engine, int gmax);

// b0 < (2g-2+n) V_{g,n} / V_{g,n+1} < b1 for 1 <= g <= gmax, 0 <= n <= nmax.
SweepReport band_sweep(const IntersectionEngine& engine, int gmax, int nmax);

// |(2g-2+n) V_{g,n}/V_{g,n+1} - 1/(4 pi^2)| at g_hi strictly below g_lo.
SweepReport ratio_trend(const IntersectionEngine& engine, const std::vector<int>& ns, int g_lo = 2, int g_hi = 8);

// |V_{g,n}/V_{g-1,n+2} - 1| at g_hi strictly below g_lo.
SweepReport genus_shift_trend(const IntersectionEngine& engine, const std::vector<int>& ns, int g_lo = 3,
                              int g_hi = 8);

// V(x)/V <= prod sinh(x_i/2)/(x_i/2) + margin on the full grid^n.
SweepReport sinh_sweep(const IntersectionEngine& engine, const std::vector<std::pair<int, int>>& types,
                       const std::vector<double>& grid, double margin = 1e-9);

// prod_i sinh(x_i/2)/(x_i/2) as an enclosure (1 at x_i = 0).
Interval sinh_factor(std::span<const double> x, mpfr_prec_t prec = working_precision());

// {start, start + step, ..., stop}
std::vector<double> uniform_grid(double start, double stop, double step);

}  // namespace wpvol
