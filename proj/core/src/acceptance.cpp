#include "wpvol/acceptance.hpp"

#include "wpvol/bounds.hpp"
#include "wpvol/geodesics.hpp"
#include "wpvol/report.hpp"
#include "wpvol/trace.hpp"
#include "wpvol/volume.hpp"

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

namespace wpvol {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

CriterionResult start(int id, std::string title) {
  CriterionResult r;
  r.id = id;
  r.title = std::move(title);
  return r;
}

const char* yes_no(bool b) { return b ? "true" : "false"; }

std::string find_summary(const SweepReport& r, const std::string& key) {
  for (const auto& [k, v] : r.summary) {
    if (k == key) return v;
  }
  return "";
}

CriterionResult base_values(const IntersectionEngine& shared) {
  CriterionResult r = start(1, "base and landmark values");
  // Cold by construction so the runtime limit is meaningful.
  const auto t0 = Clock::now();
  IntersectionEngine engine(std::make_shared<MemoCache>(shared.budget().max_cache_entries), shared.budget());
  const Pi2Scalar t03 = engine.tau(0, {0, 0, 0});
  const VolumePolynomial v11 = volume_polynomial(engine, 1, 1);
  const Pi2Scalar v2 = closed_volume(engine, 2);
  const double elapsed = seconds_since(t0);

  const bool ok03 = t03 == Pi2Scalar(1);
  const VolumePolynomial expected11(1, 1, {{{0}, Pi2Scalar::monomial(1, Rational(1, 12))},
                                           {{1}, Pi2Scalar(Rational(1, 48))}});
  const bool ok11 = v11 == expected11;
  const bool ok2 = v2 == Pi2Scalar::monomial(3, Rational(43, 2160));
  const bool fast = elapsed < 1.0;
  r.passed = ok03 && ok11 && ok2 && fast;
  r.fact("tau(0,3,[0,0,0])", t03.to_string());
  r.fact("V_{1,1}(b)", "(" + v11.coeff(std::vector<int>{1}).to_string() + ") b^2 + " +
                           v11.coeff(std::vector<int>{0}).to_string());
  r.fact("V_{1,1}_exact", yes_no(ok11));
  r.fact("V_2", v2.to_string());
  r.fact("runtime_under_1s", yes_no(fast));
  r.seconds = elapsed;
  return r;
}

CriterionResult band(const IntersectionEngine& shared) {
  CriterionResult r = start(2, "volume ratio band for 1<=g<=8, 0<=n<=4");
  const auto t0 = Clock::now();
  IntersectionEngine engine(std::make_shared<MemoCache>(shared.budget().max_cache_entries), shared.budget());
  const BandConstants k = BandConstants::compute();
  const SweepReport rep = band_sweep(engine, 8, 4);
  const double elapsed = seconds_since(t0);
  const bool b1_tight = k.b1.radius() < 1e-12;
  const bool fast = elapsed < 300.0;
  r.passed = rep.passed && b1_tight && fast;
  r.fact("pairs_checked", find_summary(rep, "pairs_checked"));
  r.fact("pairs_skipped_nonhyperbolic", find_summary(rep, "pairs_skipped_nonhyperbolic"));
  r.fact("failures", find_summary(rep, "failures"));
  r.fact("b0", format_double(k.b0.mid()));
  r.fact("b1", format_double(k.b1.mid()));
  r.fact("b1_radius_below_1e-12", yes_no(b1_tight));
  r.fact("runtime_under_300s_cold", yes_no(fast));
  r.seconds = elapsed;
  return r;
}

CriterionResult trend(const IntersectionEngine& engine) {
  CriterionResult r = start(3, "ratio approaches 1/(4 pi^2) from g=2 to g=8");
  const SweepReport rep = ratio_trend(engine, {0, 1, 2}, 2, 8);
  r.passed = rep.passed;
  for (const auto& row : rep.table.rows) {
    r.fact("n=" + row[0] + " dev(g=2)", row[1]);
    r.fact("n=" + row[0] + " dev(g=8)", row[2]);
  }
  return r;
}

CriterionResult monotonicity(const IntersectionEngine& engine) {
  CriterionResult r = start(4, "monotonicity over g<=5, n<=3");
  const SweepReport rep = monotonicity_sweep(engine, KeySweep{0, 5, 1, 3});
  r.passed = rep.passed;
  for (const auto& [key, value] : rep.summary) r.fact(key, value);
  return r;
}

CriterionResult decay(const IntersectionEngine& engine) {
  CriterionResult r = start(5, "constructive decay with proof constants");
  const SweepReport rep = decay_sweep(engine, KeySweep{0, 5, 1, 3});
  r.passed = rep.passed;
  for (const auto& [key, value] : rep.summary) r.fact(key, value);
  return r;
}

CriterionResult sinh_bound(const IntersectionEngine& engine) {
  CriterionResult r = start(6, "sinh upper bound on {2..6}x{1,2}, grid 0..20 step 0.5");
  std::vector<std::pair<int, int>> types;
  for (int g = 2; g <= 6; ++g) {
    for (int n = 1; n <= 2; ++n) types.emplace_back(g, n);
  }
  const SweepReport rep = sinh_sweep(engine, types, uniform_grid(0.0, 20.0, 0.5), 1e-9);
  r.passed = rep.passed;
  for (const auto& [key, value] : rep.summary) r.fact(key, value);
  return r;
}

CriterionResult symmetry(const IntersectionEngine& engine, std::uint64_t seed) {
  CriterionResult r = start(7, "permutation invariance and homogeneity");
  std::mt19937_64 rng(seed);
  std::size_t keys = 0;
  std::size_t expansions = 0;
  std::size_t mismatches = 0;
  std::size_t inhomogeneous = 0;
  while (keys < 50) {
    const int g = std::uniform_int_distribution<int>(0, 4)(rng);
    const int n = std::uniform_int_distribution<int>(2, 5)(rng);
    if (2 * g - 2 + n <= 0 || (g == 0 && n == 3)) continue;
    const int dim = 3 * g - 3 + n;
    const int total = std::uniform_int_distribution<int>(0, dim)(rng);
    std::vector<int> d(n, 0);
    for (int i = 0; i < total; ++i) ++d[std::uniform_int_distribution<int>(0, n - 1)(rng)];
    ++keys;
    const Pi2Scalar value = engine.tau(g, n, d);
    const IndexKey key = canonical_key(g, n, d).key;
    if (!value.is_homogeneous(key.degree())) ++inhomogeneous;
    // Every distinct value takes a turn as the distinguished index, with the
    // remaining indices shuffled.
    std::vector<int> distinct = d;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    for (int lead : distinct) {
      std::vector<int> order = d;
      std::iter_swap(order.begin(), std::find(order.begin(), order.end(), lead));
      std::shuffle(order.begin() + 1, order.end(), rng);
      ++expansions;
      if (engine.expand(g, order) != value) ++mismatches;
    }
  }
  for (const auto& [key, value] : engine.cache()->sorted_entries()) {
    if (!value.is_homogeneous(key.degree())) ++inhomogeneous;
  }
  // The insert path must reject an inhomogeneous value.
  bool guarded = false;
  try {
    MemoCache scratch;
    scratch.insert(canonical_key(1, 2, std::vector<int>{1, 0}).key, Pi2Scalar(1) + Pi2Scalar::monomial(1, 1));
  } catch (const IntegrityError&) {
    guarded = true;
  }
  r.passed = keys >= 50 && mismatches == 0 && inhomogeneous == 0 && guarded;
  r.fact("random_keys", std::to_string(keys));
  r.fact("expansions", std::to_string(expansions));
  r.fact("mismatches", std::to_string(mismatches));
  r.fact("inhomogeneous_values", std::to_string(inhomogeneous));
  r.fact("insert_rejects_inhomogeneous", yes_no(guarded));
  return r;
}

CriterionResult crossover(const IntersectionEngine& engine) {
  CriterionResult r = start(8, "crossover at g=8 and separating fraction for g=4..8");
  ExpectationEngine ee(engine);
  const std::vector<CrossoverRow> rows = ee.crossover_table(8, {Rational(3, 2), Rational(13)});
  const bool low = rows[0].ratio > 0.8 && rows[0].ratio < 1.2;
  const bool high = rows[1].ratio < 0.5;
  r.fact("ratio(g=8,L=1.5)", format_double(rows[0].ratio));
  r.fact("ratio_in_(0.8,1.2)", yes_no(low));
  r.fact("ratio(g=8,L=13)", format_double(rows[1].ratio));
  r.fact("ratio_below_0.5", yes_no(high));
  bool sep = true;
  for (int g = 4; g <= 8; ++g) {
    const double e = ee.expected_nsep(g, Rational(3)).to_double();
    const double s = ee.expected_sep_total(g, Rational(3)).upper.to_double();
    const double frac = s / e;
    const bool ok = frac < 10.0 / g;
    sep = sep && ok;
    r.fact("sep/nsep(g=" + std::to_string(g) + ",L=3)", format_double(frac));
  }
  r.fact("sep_fraction_below_10/g", yes_no(sep));
  r.passed = low && high && sep;
  return r;
}

CriterionResult trace_toolkit(std::uint64_t seed) {
  CriterionResult r = start(9, "trace toolkit");
  const auto t0 = Clock::now();
  double window_diff = 0.0;
  for (double T : {1.0, 5.0}) {
    for (double rr : {0.0, 0.5, 3.0}) {
      window_diff = std::max(window_diff, std::abs(cosh_window_hat(rr, T) - cosh_window_hat_quadrature(rr, T)));
    }
  }
  const bool window_ok = window_diff < 1e-8;

  const BumpFamily counting = BumpFamily::counting();
  const BumpFamily smoothing = BumpFamily::smoothing();
  const double hat_dev = std::max(std::abs(counting.hat(0.0) - 1.0), std::abs(smoothing.hat(0.0) - 1.0));
  const bool hat_ok = hat_dev <= 1e-10;

  std::size_t sandwich_violations = 0;
  for (const auto& [T, eps] : {std::pair{5.0, 0.2}, std::pair{10.0, 0.5}}) {
    sandwich_violations += check_sandwich(smoothing, T, eps, 200).violations;
  }

  double count_diff = 0.0;
  std::size_t max_primitives = 0;
  std::size_t order_violations = 0;
  std::size_t bound_violations = 0;
  std::int64_t total_count = 0;
  constexpr double kL = 6.0;
  constexpr double kEps = 0.005;
  for (std::uint64_t i = 0; i < 20; ++i) {
    SyntheticOptions so;
    so.genus = 2 + static_cast<int>(i % 4);
    so.min_length = 1.0;
    so.max_length = kL;
    so.seed = seed + i;
    const LengthSpectrum spec = synthetic_spectrum(so);
    max_primitives = std::max(max_primitives, spec.entries.size());
    for (int sign : {1, -1}) {
      const CountIdentity ci = count_identity(counting, spec, kL, kEps, sign);
      count_diff = std::max(count_diff, std::abs(ci.integral_value - static_cast<double>(ci.exact_count)));
      if (sign == 1) total_count += ci.exact_count;
    }
    const GeometricSums s = geometric_sums(spec, kL);
    if (!(s.H >= s.psi && s.psi >= s.nu && s.nu >= 0.0)) ++order_violations;
    if (!within_count_bound(spec, kL)) ++bound_violations;
  }
  const double elapsed = seconds_since(t0);
  const bool count_ok = count_diff <= 1e-6 && max_primitives <= 100;
  const bool fast = elapsed < 120.0;
  r.passed = window_ok && hat_ok && sandwich_violations == 0 && count_ok && order_violations == 0 &&
             bound_violations == 0 && fast;
  r.fact("window_hat_max_abs_diff", format_double(window_diff));
  r.fact("bump_hat0_max_dev", format_double(hat_dev));
  r.fact("sandwich_violations", std::to_string(sandwich_violations));
  r.fact("spectra", "20");
  r.fact("max_primitives", std::to_string(max_primitives));
  r.fact("oriented_primitives_total", std::to_string(total_count));
  r.fact("count_identity_max_abs_diff", format_double(count_diff));
  r.fact("H>=psi>=nu_violations", std::to_string(order_violations));
  r.fact("count_bound_violations", std::to_string(bound_violations));
  r.fact("runtime_under_120s", yes_no(fast));
  r.seconds = elapsed;
  return r;
}

AcceptanceReport run_ids(const std::vector<int>& ids, const IntersectionEngine& engine, const AcceptanceOptions& opt) {
  AcceptanceReport rep;
  for (int id : ids) rep.criteria.push_back(run_criterion(id, engine, opt));
  return rep;
}

const std::vector<int> kCore = {1, 2, 3, 4, 5, 6, 7, 8, 9};

CriterionResult determinism(const IntersectionEngine& engine, const AcceptanceOptions& opt,
                            const std::optional<std::string>& cold_text) {
  CriterionResult r = start(10, "determinism across cold and warm caches");
  const auto t0 = Clock::now();
  const Budget budget = engine.budget();

  std::string cold = cold_text.value_or("");
  AcceptanceReport cold_rep;
  std::shared_ptr<MemoCache> warm_source = engine.cache();
  if (!cold_text) {
    auto fresh = std::make_shared<MemoCache>(budget.max_cache_entries);
    IntersectionEngine e(fresh, budget);
    cold_rep = run_ids(kCore, e, opt);
    cold = cold_rep.to_text();
    warm_source = fresh;
  }

  const std::filesystem::path dir = opt.scratch_dir.value_or(std::filesystem::temp_directory_path());
  const std::filesystem::path file =
      dir / ("wpvol-determinism-" + std::to_string(::getpid()) + "-" + std::to_string(opt.seed) + ".ndjson");
  warm_source->save(file);
  auto warm_cache = std::make_shared<MemoCache>(budget.max_cache_entries);
  const std::size_t loaded = warm_cache->load(file);
  std::error_code ec;
  std::filesystem::remove(file, ec);
  IntersectionEngine warm_engine(warm_cache, budget);
  const AcceptanceReport warm_rep = run_ids(kCore, warm_engine, opt);
  const std::string warm = warm_rep.to_text();

  const bool identical = cold == warm;
  const bool warm_passed = warm_rep.passed();
  r.passed = identical && warm_passed;
  r.fact("byte_identical", yes_no(identical));
  r.fact("cache_records_reloaded", std::to_string(loaded));
  std::string failing;
  for (int id : warm_rep.failing()) failing += (failing.empty() ? "" : ",") + std::to_string(id);
  r.fact("suite_passed_both_runs", yes_no(warm_passed));
  r.fact("failing_in_both_runs", failing.empty() ? "none" : failing);
  r.seconds = seconds_since(t0);
  return r;
}

}  // namespace

bool AcceptanceReport::passed() const {
  return std::all_of(criteria.begin(), criteria.end(), [](const CriterionResult& c) { return c.passed; });
}

std::vector<int> AcceptanceReport::failing() const {
  std::vector<int> ids;
  for (const auto& c : criteria) {
    if (!c.passed) ids.push_back(c.id);
  }
  return ids;
}

std::string AcceptanceReport::to_text() const {
  std::ostringstream os;
  for (const auto& c : criteria) {
    os << (c.passed ? "[PASS] " : "[FAIL] ") << c.id << ' ' << c.title << ':';
    for (std::size_t i = 0; i < c.facts.size(); ++i) {
      os << (i == 0 ? " " : "; ") << c.facts[i].first << '=' << c.facts[i].second;
    }
    os << '\n';
  }
  os << (passed() ? "verdict: PASS" : "verdict: FAIL") << " (" << criteria.size() - failing().size() << '/'
     << criteria.size() << " criteria)\n";
  return os.str();
}

nlohmann::ordered_json AcceptanceReport::to_json() const {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& c : criteria) {
    nlohmann::ordered_json facts = nlohmann::ordered_json::object();
    for (const auto& [k, v] : c.facts) facts[k] = v;
    arr.push_back({{"id", c.id}, {"title", c.title}, {"passed", c.passed}, {"facts", facts}});
  }
  return {{"criteria", arr}, {"passed", passed()}};
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"all",       "base",  "bounds",     "symmetry",
                                                 "crossover", "trace", "determinism"};
  return names;
}

std::vector<int> suite_criteria(const std::string& suite) {
  static const std::map<std::string, std::vector<int>> table = {
      {"all", {1, 2, 3, 4, 5, 6, 7, 8, 9, 10}},
      {"base", {1}},
      {"bounds", {2, 3, 4, 5, 6}},
      {"symmetry", {7}},
      {"crossover", {8}},
      {"trace", {9}},
      {"determinism", {10}},
  };
  const auto it = table.find(suite);
  if (it == table.end()) throw std::invalid_argument("unknown suite '" + suite + "'");
  return it->second;
}

CriterionResult run_criterion(int id, const IntersectionEngine& engine, const AcceptanceOptions& opt) {
  const auto t0 = Clock::now();
  CriterionResult r;
  switch (id) {
    case 1: return base_values(engine);
    case 2: return band(engine);
    case 3: r = trend(engine); break;
    case 4: r = monotonicity(engine); break;
    case 5: r = decay(engine); break;
    case 6: r = sinh_bound(engine); break;
    case 7: r = symmetry(engine, opt.seed); break;
    case 8: r = crossover(engine); break;
    case 9: return trace_toolkit(opt.seed);
    case 10: return determinism(engine, opt, std::nullopt);
    default: throw std::invalid_argument("unknown criterion " + std::to_string(id));
  }
  r.seconds = seconds_since(t0);
  return r;
}

AcceptanceReport run_suite(const std::string& suite, const IntersectionEngine& engine, const AcceptanceOptions& opt) {
  const std::vector<int> ids = suite_criteria(suite);
  const bool started_cold = engine.cache()->size() == 0;
  AcceptanceReport rep;
  for (int id : ids) {
    if (id != 10) {
      rep.criteria.push_back(run_criterion(id, engine, opt));
      continue;
    }
    // A cold pass over 1-9 already done in this run serves as the cold side.
    std::optional<std::string> cold;
    if (started_cold && rep.criteria.size() == kCore.size()) {
      AcceptanceReport prefix;
      prefix.criteria = rep.criteria;
      cold = prefix.to_text();
    }
    rep.criteria.push_back(determinism(engine, opt, cold));
  }
  return rep;
}

}  // namespace wpvol
