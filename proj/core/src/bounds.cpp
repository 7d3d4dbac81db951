#include "wpvol/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace wpvol {

BandConstants BandConstants::compute(mpfr_prec_t prec) {
  BandConstants k;
  const Interval pi2 = Interval::pi(prec).pow(2);
  const Interval ten_minus = Interval(Rational(10), prec) - pi2;
  k.b0 = ten_minus / Interval(Rational(120), prec);
  k.b = Interval(Rational(120), prec) / ten_minus;
  k.c_proof = Interval(Rational(2), prec) / (Interval(Rational(3), prec) * k.b);

  // Terms decay like pi^{2l}/(2l+1)!, so 40 terms leave a tail far below
  // 2^-128; the tail is still enclosed by twice the first omitted term.
  constexpr int kTerms = 40;
  Interval sum(Rational(0), prec);
  Interval pi_pow(Rational(1), prec);  // pi^{2l-2}
  for (int l = 1; l <= kTerms; ++l) {
    if (l > 1) pi_pow *= pi2;
    sum += pi_pow * Interval(Rational(Integer(l), factorial(static_cast<unsigned>(2 * l + 1))), prec);
  }
  const Interval next = pi_pow * pi2 *
                        Interval(Rational(Integer(kTerms + 1), factorial(static_cast<unsigned>(2 * kTerms + 3))), prec);
  k.b1 = sum + Interval::hull(0.0, 2.0 * next.upper(), prec);
  return k;
}

std::vector<IndexKey> enumerate_keys(const KeySweep& sweep) {
  std::vector<IndexKey> keys;
  for (int g = std::max(0, sweep.gmin); g <= sweep.gmax; ++g) {
    for (int n = std::max(1, sweep.nmin); n <= sweep.nmax; ++n) {
      if (2 * g - 2 + n <= 0) continue;
      const int dim = 3 * g - 3 + n;
      std::vector<int> d(static_cast<std::size_t>(n), 0);
      // Descending vectors: d[i] <= d[i-1].
      const std::function<void(int, int, int)> rec = [&](int slot, int cap, int left) {
        if (slot == n) {
          keys.push_back(IndexKey{g, n, d});
          return;
        }
        for (int v = 0; v <= std::min(cap, left); ++v) {
          d[static_cast<std::size_t>(slot)] = v;
          rec(slot + 1, v, left - v);
        }
      };
      rec(0, dim, dim);
    }
  }
  std::sort(keys.begin(), keys.end());
  return keys;
}

namespace {

bool exact_leq(const Pi2Scalar& a, const Pi2Scalar& b, mpfr_prec_t prec) {
  return a == b || certainly_leq(a.enclose(prec), b.enclose(prec));
}

bool exact_less(const Pi2Scalar& a, const Pi2Scalar& b, mpfr_prec_t prec) {
  return a != b && certainly_less(a.enclose(prec), b.enclose(prec));
}

std::string interval_text(const Interval& x) { return format_double(x.mid()); }

}  // namespace

DecayCheck check_constructive_decay(const IntersectionEngine& engine, int g, int n, std::span<const int> d,
                                    const std::optional<Interval>& c) {
  const mpfr_prec_t prec = working_precision();
  if (2 * g - 2 + n <= 0) throw std::invalid_argument("check_constructive_decay: nonhyperbolic (g, n)");
  const Interval cc = c ? *c : BandConstants::compute(prec).c_proof;
  const Interval m(Rational(2 * g - 2 + n), prec);
  const Interval one(Rational(1), prec);
  const Interval log4 = Interval(Rational(4), prec).log();
  DecayCheck out;
  out.lhs = engine.tau_ratio_interval(g, n, d, prec);
  out.rhs = one;
  Interval exponent_sum(Rational(0), prec);  // sum_{i in I} (ln h_i)^2 / (2 ln 4)
  for (std::size_t i = 0; i < d.size(); ++i) {
    const Interval h = cc * Interval(Rational(Integer(d[i]) * d[i]), prec) / m;
    if (certainly_leq(h, one)) continue;
    out.I.push_back(static_cast<int>(i));
    const Interval lh = h.log();
    // lh may straddle 0 only when h straddles 1; (ln h)^2 stays >= 0 either way.
    Interval sq = lh * lh;
    if (mpfr_sgn(sq.lo()) < 0) sq = Interval::hull(0.0, sq.upper(), prec);
    exponent_sum += sq / (Interval(Rational(2), prec) * log4);
  }
  out.vacuous = out.I.empty();
  if (!out.vacuous) out.rhs = (-exponent_sum).exp();
  out.holds = out.vacuous || certainly_leq(out.lhs, out.rhs);
  return out;
}

SweepReport decay_sweep(const IntersectionEngine& engine, const KeySweep& sweep, const std::optional<Interval>& c) {
  SweepReport rep;
  rep.name = "constructive_decay";
  rep.table.columns = {"g", "n", "d", "I", "tau_ratio", "rhs", "holds"};
  std::size_t total = 0;
  std::size_t nonempty = 0;
  std::size_t failures = 0;
  for (const IndexKey& key : enumerate_keys(sweep)) {
    ++total;
    const DecayCheck chk = check_constructive_decay(engine, key.g, key.n, key.d, c);
    if (chk.vacuous) continue;
    ++nonempty;
    if (!chk.holds) ++failures;
    rep.table.add_row({std::to_string(key.g), std::to_string(key.n), format_index(key.d), format_index(chk.I),
                       interval_text(chk.lhs), interval_text(chk.rhs), chk.holds ? "true" : "false"});
  }
  rep.passed = failures == 0;
  rep.note("constant", c ? format_double(c->mid()) : "c_proof = 2/(3b)");
  rep.note("keys_swept", std::to_string(total));
  rep.note("keys_with_nonempty_I", std::to_string(nonempty));
  rep.note("failures", std::to_string(failures));
  rep.note("vacuous", nonempty == 0 ? "true" : "false");
  return rep;
}

SweepReport monotonicity_sweep(const IntersectionEngine& engine, const KeySweep& sweep) {
  const mpfr_prec_t prec = working_precision();
  SweepReport rep;
  rep.name = "monotonicity";
  rep.table.columns = {"g", "n", "d", "slot", "violation"};
  std::size_t comparisons = 0;
  std::size_t violations = 0;
  for (const IndexKey& key : enumerate_keys(sweep)) {
    const Pi2Scalar t = engine.tau(key.g, key.n, key.d);
    const std::vector<int> zeros(key.d.size(), 0);
    const Pi2Scalar vol = engine.tau(key.g, key.n, zeros);
    for (std::size_t i = 0; i < key.d.size(); ++i) {
      if (i > 0 && key.d[i] == key.d[i - 1]) continue;  // same value, same checks
      std::vector<int> up = key.d;
      ++up[i];
      std::vector<int> zeroed = key.d;
      zeroed[i] = 0;
      const Pi2Scalar t_up = engine.tau(key.g, key.n, up);
      const Pi2Scalar t_zero = engine.tau(key.g, key.n, zeroed);
      std::string what;
      if (!exact_less(t_up, t, prec)) what = "tau(d+e_i) >= tau(d)";
      if (what.empty() && !exact_leq(t, t_zero, prec)) what = "tau(d) > tau(d; d_i=0)";
      if (what.empty() && !exact_leq(t_zero, vol, prec)) what = "tau(d; d_i=0) > V";
      comparisons += 3;
      if (!what.empty()) {
        ++violations;
        rep.table.add_row({std::to_string(key.g), std::to_string(key.n), format_index(key.d), std::to_string(i), what});
      }
    }
  }
  rep.passed = violations == 0;
  rep.note("comparisons", std::to_string(comparisons));
  rep.note("violations", std::to_string(violations));
  return rep;
}

SweepReport estimate_inup_constant(const IntersectionEngine& engine, const KeySweep& sweep) {
  SweepReport rep;
  rep.name = "inup_constant";
  rep.table.columns = {"g", "n", "d", "tau_ratio", "scaled"};
  const int g_half = sweep.gmin + (sweep.gmax - sweep.gmin) / 2;
  double full = 0.0;
  double half = 0.0;
  std::string witness_full;
  std::string witness_half;
  for (const IndexKey& key : enumerate_keys(sweep)) {
    const int dmax = key.d.front();
    if (dmax == 0) continue;
    const double ratio = engine.tau_ratio(key.g, key.n, key.d);
    const double scaled = ratio * dmax * dmax / (2.0 * key.g - 2 + key.n);
    rep.table.add_row({std::to_string(key.g), std::to_string(key.n), format_index(key.d), format_double(ratio),
                       format_double(scaled)});
    if (scaled > full) {
      full = scaled;
      witness_full = key.to_string();
    }
    if (key.g <= g_half && scaled > half) {
      half = scaled;
      witness_half = key.to_string();
    }
  }
  rep.passed = full > 0.0 && half <= full;
  rep.note("c_emp_full", format_double(full));
  rep.note("witness_full", witness_full);
  rep.note("half_sweep_gmax", std::to_string(g_half));
  rep.note("c_emp_half", format_double(half));
  rep.note("witness_half", witness_half);
  rep.note("stabilized", full > 0.0 && (full - half) / full < 0.05 ? "true" : "false");
  return rep;
}

Interval sinh_factor(std::span<const double> x, mpfr_prec_t prec) {
  Interval acc(Rational(1), prec);
  for (double xi : x) {
    if (xi < 0) throw std::invalid_argument("sinh_factor: negative argument");
    if (xi == 0.0) continue;
    const Interval h = Interval(xi, prec) / Interval(Rational(2), prec);
    acc *= h.sinh() / h;
  }
  return acc;
}

std::vector<double> uniform_grid(double start, double stop, double step) {
  if (!(step > 0)) throw std::invalid_argument("uniform_grid: step must be positive");
  std::vector<double> out;
  const long count = std::lround(std::floor((stop - start) / step + 1e-9));
  for (long i = 0; i <= count; ++i) out.push_back(start + static_cast<double>(i) * step);
  return out;
}

namespace {

// Calls f on every point of grid^n in lexicographic order.
void for_each_point(int n, const std::vector<double>& grid, const std::function<void(const std::vector<double>&)>& f) {
  std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
  std::vector<double> x(static_cast<std::size_t>(n), grid.empty() ? 0.0 : grid[0]);
  if (grid.empty()) return;
  while (true) {
    for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = grid[idx[static_cast<std::size_t>(i)]];
    f(x);
    int pos = n - 1;
    while (pos >= 0 && ++idx[static_cast<std::size_t>(pos)] == grid.size()) {
      idx[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) return;
  }
}

// Smallest c with (prod_i min{c m / x_i^2, 1})^k >= r, r in (0, 1].
double minimal_decay_constant(std::span<const double> x, double m, int k, double r) {
  if (!(r > 0)) return 0.0;
  double tmax = 0.0;
  for (double xi : x) tmax = std::max(tmax, xi * xi / m);
  if (tmax == 0.0) return 0.0;
  if (r > 1.0 + 1e-12) return std::numeric_limits<double>::infinity();
  r = std::min(r, 1.0);
  const auto lhs = [&](double c) {
    double logf = 0.0;
    for (double xi : x) {
      if (xi == 0.0) continue;
      logf += std::min(0.0, std::log(c * m / (xi * xi)));
    }
    return k * logf;
  };
  const double target = std::log(r);
  double lo = std::log(tmax) - 800.0;
  double hi = std::log(tmax);
  if (lhs(std::exp(lo)) >= target) return std::exp(lo);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (lhs(std::exp(mid)) >= target) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return std::exp(hi);
}

}  // namespace

SweepReport check_volume_decay(const IntersectionEngine& engine, int k, const std::vector<std::pair<int, int>>& types,
                               const std::vector<double>& grid) {
  if (k < 1) throw std::invalid_argument("check_volume_decay: k must be at least 1");
  const mpfr_prec_t prec = working_precision();
  SweepReport rep;
  rep.name = "volume_decay";
  rep.table.columns = {"g", "n", "points", "c_emp", "witness_x", "sinh_violations"};
  const Interval slack(1e-9, prec);
  double overall = 0.0;
  std::string overall_witness;
  std::size_t sinh_violations = 0;
  for (const auto& [g, n] : types) {
    const VolumePolynomial p = volume_polynomial(engine, g, n);
    const PolynomialEvaluator eval(p, prec);
    const Interval v0 = p.constant_term().enclose(prec);
    const double m = 2.0 * g - 2 + n;
    double c_emp = 0.0;
    std::string witness;
    std::size_t points = 0;
    std::size_t local_violations = 0;
    for_each_point(n, grid, [&](const std::vector<double>& x) {
      ++points;
      const Interval s = sinh_factor(x, prec);
      const Interval ratio = eval(x) / v0;
      if (!certainly_leq(ratio, s + slack)) ++local_violations;
      const double c = minimal_decay_constant(x, m, k, (ratio / s).mid());
      if (c > c_emp) {
        c_emp = c;
        witness = format_reals(x);
      }
    });
    sinh_violations += local_violations;
    if (c_emp > overall) {
      overall = c_emp;
      overall_witness = "(g=" + std::to_string(g) + ", n=" + std::to_string(n) + ", x=" + witness + ")";
    }
    rep.table.add_row({std::to_string(g), std::to_string(n), std::to_string(points), format_double(c_emp), witness,
                       std::to_string(local_violations)});
  }
  rep.passed = sinh_violations == 0;
  rep.note("k", std::to_string(k));
  rep.note("c_emp", format_double(overall));
  rep.note("witness", overall_witness);
  rep.note("sinh_violations", std::to_string(sinh_violations));
  return rep;
}

SweepReport check_sum_products(const IntersectionEngine& engine, int gmax) {
  if (gmax < 4) throw std::invalid_argument("check_sum_products: gmax must be at least 4");
  const mpfr_prec_t prec = working_precision();
  SweepReport rep;
  rep.name = "sum_products";
  rep.table.columns = {"g", "terms_1", "g_times_sum_1", "terms_2", "g2_times_sum_2"};
  std::vector<double> col1;
  std::vector<double> col2;
  for (int g = 4; g <= gmax; ++g) {
    const Interval vg = closed_volume(engine, g).enclose(prec);
    Interval s1(Rational(0), prec);
    Interval s2(Rational(0), prec);
    int t1 = 0;
    int t2 = 0;
    for (int g1 = 1; 2 * g1 <= g; ++g1) {
      s1 += volume(engine, g1, 1).enclose(prec) * volume(engine, g - g1, 1).enclose(prec);
      ++t1;
    }
    for (int g1 = 1; 2 * g1 <= g - 1; ++g1) {
      s2 += volume(engine, g1, 2).enclose(prec) * volume(engine, g - 1 - g1, 2).enclose(prec);
      ++t2;
    }
    const double c1 = (s1 / vg).mid() * g;
    const double c2 = (s2 / vg).mid() * g * g;
    col1.push_back(c1);
    col2.push_back(c2);
    rep.table.add_row({std::to_string(g), std::to_string(t1), format_double(c1), std::to_string(t2), format_double(c2)});
  }
  const auto spread = [](const std::vector<double>& v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi / *lo;
  };
  const double sp1 = spread(col1);
  const double sp2 = spread(col2);
  const bool positive = std::all_of(col1.begin(), col1.end(), [](double v) { return v > 0; }) &&
                        std::all_of(col2.begin(), col2.end(), [](double v) { return v > 0; });
  rep.passed = positive && sp1 <= 10.0 && sp2 <= 10.0;
  rep.note("spread_1", format_double(sp1));
  rep.note("spread_2", format_double(sp2));
  rep.note("flag_factor_10", sp1 > 10.0 || sp2 > 10.0 ? "true" : "false");
  return rep;
}

namespace {

Interval shifted_ratio(const IntersectionEngine& engine, int g, int n, mpfr_prec_t prec) {
  const Interval num = volume_any(engine, g, n).enclose(prec) * Interval(Rational(2 * g - 2 + n), prec);
  return num / volume(engine, g, n + 1).enclose(prec);
}

Interval abs_interval(const Interval& x, mpfr_prec_t prec) {
  if (mpfr_sgn(x.lo()) >= 0) return x;
  if (mpfr_sgn(x.hi()) <= 0) return -x;
  return Interval::hull(0.0, std::max(-x.lower(), x.upper()), prec);
}

}  // namespace

SweepReport band_sweep(const IntersectionEngine& engine, int gmax, int nmax) {
  const mpfr_prec_t prec = working_precision();
  const BandConstants k = BandConstants::compute(prec);
  SweepReport rep;
  rep.name = "band";
  rep.table.columns = {"g", "n", "ratio", "ratio_lo", "ratio_hi", "holds"};
  std::size_t checked = 0;
  std::size_t skipped = 0;
  std::size_t failures = 0;
  for (int g = 1; g <= gmax; ++g) {
    for (int n = 0; n <= nmax; ++n) {
      if (2 * g - 2 + n <= 0) {
        ++skipped;
        continue;
      }
      const Interval r = shifted_ratio(engine, g, n, prec);
      const bool holds = certainly_less(k.b0, r) && certainly_less(r, k.b1);
      ++checked;
      if (!holds) ++failures;
      rep.table.add_row({std::to_string(g), std::to_string(n), format_double(r.mid()), format_double(r.lower()),
                         format_double(r.upper()), holds ? "true" : "false"});
    }
  }
  rep.passed = failures == 0;
  rep.note("b0", format_double(k.b0.mid()));
  rep.note("b1", format_double(k.b1.mid()));
  rep.note("b1_radius", format_double(k.b1.radius()));
  rep.note("pairs_checked", std::to_string(checked));
  rep.note("pairs_skipped_nonhyperbolic", std::to_string(skipped));
  rep.note("failures", std::to_string(failures));
  return rep;
}

SweepReport ratio_trend(const IntersectionEngine& engine, const std::vector<int>& ns, int g_lo, int g_hi) {
  const mpfr_prec_t prec = working_precision();
  const Interval target = Interval(Rational(1), prec) / (Interval(Rational(4), prec) * Interval::pi(prec).pow(2));
  SweepReport rep;
  rep.name = "ratio_trend";
  rep.table.columns = {"n", "dev_g_lo", "dev_g_hi", "holds"};
  bool all = true;
  for (int n : ns) {
    const Interval lo = abs_interval(shifted_ratio(engine, g_lo, n, prec) - target, prec);
    const Interval hi = abs_interval(shifted_ratio(engine, g_hi, n, prec) - target, prec);
    const bool holds = certainly_less(hi, lo);
    all = all && holds;
    rep.table.add_row({std::to_string(n), format_double(lo.mid()), format_double(hi.mid()), holds ? "true" : "false"});
  }
  rep.passed = all;
  rep.note("g_lo", std::to_string(g_lo));
  rep.note("g_hi", std::to_string(g_hi));
  rep.note("target", format_double(target.mid()));
  return rep;
}

SweepReport genus_shift_trend(const IntersectionEngine& engine, const std::vector<int>& ns, int g_lo, int g_hi) {
  const mpfr_prec_t prec = working_precision();
  const Interval one(Rational(1), prec);
  SweepReport rep;
  rep.name = "genus_shift_trend";
  rep.table.columns = {"n", "g", "ratio", "deviation"};
  bool all = true;
  for (int n : ns) {
    Interval first(prec);
    Interval last(prec);
    for (int g = g_lo; g <= g_hi; ++g) {
      const Interval r = volume_any(engine, g, n).enclose(prec) / volume(engine, g - 1, n + 2).enclose(prec);
      const Interval dev = abs_interval(r - one, prec);
      if (g == g_lo) first = dev;
      if (g == g_hi) last = dev;
      rep.table.add_row({std::to_string(n), std::to_string(g), format_double(r.mid()), format_double(dev.mid())});
    }
    const bool holds = certainly_less(last, first);
    all = all && holds;
    rep.note("n=" + std::to_string(n) + " shrinks", holds ? "true" : "false");
  }
  rep.passed = all;
  return rep;
}

SweepReport sinh_sweep(const IntersectionEngine& engine, const std::vector<std::pair<int, int>>& types,
                       const std::vector<double>& grid, double margin) {
  const mpfr_prec_t prec = working_precision();
  SweepReport rep;
  rep.name = "sinh_upper_bound";
  rep.table.columns = {"g", "n", "points", "violations", "max_ratio_over_bound", "witness_x"};
  std::size_t violations = 0;
  std::size_t points_total = 0;
  const Interval slack(margin, prec);
  for (const auto& [g, n] : types) {
    const VolumePolynomial p = volume_polynomial(engine, g, n);
    const PolynomialEvaluator eval(p, prec);
    const Interval v0 = p.constant_term().enclose(prec);
    std::size_t points = 0;
    std::size_t local = 0;
    double worst = 0.0;
    std::string witness;
    for_each_point(n, grid, [&](const std::vector<double>& x) {
      ++points;
      const Interval ratio = eval(x) / v0;
      const Interval bound = sinh_factor(x, prec);
      if (!certainly_leq(ratio, bound + slack)) ++local;
      const double q = (ratio / bound).mid();
      if (q > worst) {
        worst = q;
        witness = format_reals(x);
      }
    });
    violations += local;
    points_total += points;
    rep.table.add_row({std::to_string(g), std::to_string(n), std::to_string(points), std::to_string(local),
                       format_double(worst), witness});
  }
  rep.passed = violations == 0;
  rep.note("margin", format_double(margin));
  rep.note("points", std::to_string(points_total));
  rep.note("violations", std::to_string(violations));
  return rep;
}

}  // namespace wpvol
